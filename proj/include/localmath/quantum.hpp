#pragma once

// One-dimensional quantum evolution with a time-only value field.
//
// The covariant time derivative turns i hbar d/dt psi = H psi into
// i hbar (d/dt + A(t)) psi = H psi, i.e. d/dt psi = -(i/hbar) H psi - A(t) psi.
// The A term is a pure scalar damping that commutes with H, so each step is
// the exact factor exp(-integral A dt) applied around a unitary substep.

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "localmath/value_field.hpp"

namespace localmath {

using Complex = std::complex<double>;

/// Uniform periodic grid y_i = origin + i * spacing, i = 0..n-1.
struct Grid1D {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t n = 0;

  double y(std::size_t i) const noexcept { return origin + static_cast<double>(i) * spacing; }
  double length() const noexcept { return spacing * static_cast<double>(n); }
};

struct WaveFunction1D {
  Grid1D grid;
  std::vector<Complex> amps;
  double t = 0.0;

  /// sum_i |psi_i|^2 dy
  double norm_sq() const;
};

/// Discretely normalized Gaussian packet exp(-(y-y0)^2/(4 sigma^2) + i k0 y);
/// |psi|^2 has standard deviation sigma.
WaveFunction1D gaussian_packet(const Grid1D& grid, double center, double sigma, double k0 = 0.0);

/// <y> and Var(y) under the plain measure, normalizing by the current norm.
double mean_position(const WaveFunction1D& psi);
double position_variance(const WaveFunction1D& psi);

struct HamiltonianSpec {
  enum class Kind {
    spectral_free,      // -hbar^2/2m d^2/dy^2 diagonalized by FFT; exact propagator
    finite_difference,  // three-point Laplacian plus optional potential; Crank-Nicolson
  };
  Kind kind = Kind::spectral_free;
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<double> potential;  // finite_difference only; empty means V = 0
};

/// A(t) = d alpha / dt. When alpha is given, integrals of A over a step are
/// alpha(t1) - alpha(t0); otherwise Simpson on A.
struct TimeScaling {
  std::function<double(double)> rate;
  std::function<double(double)> alpha;

  static TimeScaling none();
  static TimeScaling constant(double a0);
  static TimeScaling from_alpha(std::function<double(double)> alpha, std::function<double(double)> rate);

  double integral(double t0, double t1) const;
};

/// e^{-alpha(x_ref, t)} sum_i e^{alpha(y_i, t)} y_i |psi_i|^2 dy, with alpha
/// evaluated at (t, y, 0, 0). Requires the plain norm to be 1 within 1e-12.
double position_expectation(const WaveFunction1D& psi, const AlphaField& field, double x_ref);

/// Advances wave functions on a fixed grid with a fixed step. Owns its
/// scratch buffers; use one stepper per thread.
class SchrodingerStepper {
 public:
  SchrodingerStepper(HamiltonianSpec hamiltonian, TimeScaling scaling, double dt, const Grid1D& grid);
  ~SchrodingerStepper();
  SchrodingerStepper(SchrodingerStepper&&) noexcept;
  SchrodingerStepper& operator=(SchrodingerStepper&&) noexcept;

  void step(WaveFunction1D& psi);
  double dt() const noexcept { return dt_; }

 private:
  struct Impl;
  void unitary_step(WaveFunction1D& psi);

  HamiltonianSpec hamiltonian_;
  TimeScaling scaling_;
  double dt_;
  Grid1D grid_;
  std::unique_ptr<Impl> impl_;
};

WaveFunction1D schrodinger_step(const WaveFunction1D& psi, const HamiltonianSpec& hamiltonian,
                                const TimeScaling& scaling, double dt);

/// E + i hbar A: the effective energy of a free-particle mode.
Complex free_particle_effective_energy(double energy, double rate, double hbar);

/// Snapshot CSV: t,y,re_psi,im_psi,prob_density.
void write_snapshot_csv(std::ostream& out, const WaveFunction1D& psi, bool header = true);

}  // namespace localmath
