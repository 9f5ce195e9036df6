#include "localmath/quantum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <ostream>

#include "localmath/constants.hpp"
#include "localmath/csv.hpp"
#include "localmath/error.hpp"
#include "localmath/kernels.hpp"

namespace localmath {

namespace {

constexpr double kNormalizationTol = 1e-12;
constexpr double kUnitarityTol = 1e-8;

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_grid(const Grid1D& grid) {
  if (grid.n < 3) fail(ErrorCode::InvalidArgument, "grid needs at least 3 points");
  if (!(grid.spacing > 0.0) || !std::isfinite(grid.spacing)) fail(ErrorCode::InvalidArgument, "grid spacing must be > 0");
}

}  // namespace

double WaveFunction1D::norm_sq() const { return kernels::norm_sq(amps) * grid.spacing; }

WaveFunction1D gaussian_packet(const Grid1D& grid, double center, double sigma, double k0) {
  require_grid(grid);
  if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "packet width must be positive");
  WaveFunction1D psi{grid, std::vector<Complex>(grid.n), 0.0};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double y = grid.y(i);
    const double d = y - center;
    psi.amps[i] = std::exp(Complex(-d * d / (4.0 * sigma * sigma), k0 * y));
  }
  kernels::scale(psi.amps, 1.0 / std::sqrt(psi.norm_sq()));
  return psi;
}

double mean_position(const WaveFunction1D& psi) {
  double num = 0.0;
  for (std::size_t i = 0; i < psi.amps.size(); ++i) num += psi.grid.y(i) * std::norm(psi.amps[i]);
  return num * psi.grid.spacing / psi.norm_sq();
}

double position_variance(const WaveFunction1D& psi) {
  const double mean = mean_position(psi);
  double num = 0.0;
  for (std::size_t i = 0; i < psi.amps.size(); ++i) {
    const double d = psi.grid.y(i) - mean;
    num += d * d * std::norm(psi.amps[i]);
  }
  return num * psi.grid.spacing / psi.norm_sq();
}

TimeScaling TimeScaling::none() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

TimeScaling TimeScaling::constant(double a0) {
  return {[a0](double) { return a0; }, [a0](double t) { return a0 * t; }};
}

TimeScaling TimeScaling::from_alpha(std::function<double(double)> alpha, std::function<double(double)> rate) {
  return {std::move(rate), std::move(alpha)};
}

double TimeScaling::integral(double t0, double t1) const {
  if (alpha) return alpha(t1) - alpha(t0);
  if (!rate) return 0.0;
  const double mid = 0.5 * (t0 + t1);
  return (t1 - t0) / 6.0 * (rate(t0) + 4.0 * rate(mid) + rate(t1));
}

double position_expectation(const WaveFunction1D& psi, const AlphaField& field, double x_ref) {
  const std::size_t n = psi.amps.size();
  if (n != psi.grid.n) fail(ErrorCode::InvalidArgument, "amplitude count does not match the grid");
  const double norm = psi.norm_sq();
  if (!(std::fabs(norm - 1.0) <= kNormalizationTol))
    fail(ErrorCode::NotNormalized, "position_expectation requires a normalized state");
  std::vector<double> w(n), g(n), prob(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = psi.grid.y(i);
    w[i] = y * psi.grid.spacing;
    g[i] = std::exp(field.alpha_at(SpacetimePoint::at(psi.t, y)));
    prob[i] = std::norm(psi.amps[i]);
  }
  return std::exp(-field.alpha_at(SpacetimePoint::at(psi.t, x_ref))) * kernels::weighted_sum3(w, g, prob);
}

// ---------------------------------------------------------------------------

struct SchrodingerStepper::Impl {
  // spectral
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<Complex> phase;

  // Crank-Nicolson: (1 + beta H) psi' = (1 - beta H) psi, beta = i dt / 2 hbar,
  // cyclic tridiagonal solved with Sherman-Morrison on a prefactored Thomas sweep.
  Complex off;                  // off-diagonal of (1 + beta H), also the periodic corners
  std::vector<Complex> diag_rhs;  // diagonal of (1 - beta H)
  std::vector<Complex> pivot;   // Thomas pivots of the modified matrix
  std::vector<Complex> upper;   // Thomas normalized super-diagonal
  std::vector<Complex> z;       // correction vector
  Complex gamma;
  Complex denom;
  std::vector<Complex> rhs;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
  }

  void thomas(std::vector<Complex>& d) const {
    const std::size_t n = d.size();
    d[0] /= pivot[0];
    for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - off * d[i - 1]) / pivot[i];
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= upper[i] * d[i + 1];
  }
};

SchrodingerStepper::SchrodingerStepper(HamiltonianSpec hamiltonian, TimeScaling scaling, double dt, const Grid1D& grid)
    : hamiltonian_(std::move(hamiltonian)), scaling_(std::move(scaling)), dt_(dt), grid_(grid),
      impl_(std::make_unique<Impl>()) {
  require_grid(grid_);
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) fail(ErrorCode::InvalidArgument, "time step must be > 0");
  if (!(hamiltonian_.mass > 0.0) || !(hamiltonian_.hbar > 0.0))
    fail(ErrorCode::InvalidArgument, "hamiltonian needs mass > 0 and hbar > 0");
  const std::size_t n = grid_.n;
  const double m = hamiltonian_.mass, hbar = hamiltonian_.hbar;

  if (hamiltonian_.kind == HamiltonianSpec::Kind::spectral_free) {
    if (!hamiltonian_.potential.empty())
      fail(ErrorCode::InvalidArgument, "spectral propagator supports the free particle only");
    impl_->phase.resize(n);
    const double dk = 2.0 * constants::pi / grid_.length();
    for (std::size_t j = 0; j < n; ++j) {
      const double idx = j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
      const double k = dk * idx;
      impl_->phase[j] = std::polar(1.0 / static_cast<double>(n), -hbar * k * k * dt_ / (2.0 * m));
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->buffer = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    impl_->forward = fftw_plan_dft_1d(len, impl_->buffer, impl_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->backward = fftw_plan_dft_1d(len, impl_->buffer, impl_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->forward || !impl_->backward) fail(ErrorCode::InvalidArgument, "FFT planning failed");
    return;
  }

  const auto& v = hamiltonian_.potential;
  if (!v.empty() && v.size() != n) fail(ErrorCode::InvalidArgument, "potential length must match the grid");
  const double kappa = hbar * hbar / (2.0 * m * grid_.spacing * grid_.spacing);
  const Complex beta(0.0, dt_ / (2.0 * hbar));
  auto& s = *impl_;
  s.off = -beta * kappa;
  std::vector<Complex> diag(n);
  s.diag_rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h_ii = 2.0 * kappa + (v.empty() ? 0.0 : v[i]);
    diag[i] = 1.0 + beta * h_ii;
    s.diag_rhs[i] = 1.0 - beta * h_ii;
  }
  // Sherman-Morrison split of the periodic corners.
  s.gamma = -diag[0];
  diag[0] -= s.gamma;
  diag[n - 1] -= s.off * s.off / s.gamma;
  s.pivot.resize(n);
  s.upper.resize(n);
  s.pivot[0] = diag[0];
  s.upper[0] = s.off / s.pivot[0];
  for (std::size_t i = 1; i < n; ++i) {
    s.pivot[i] = diag[i] - s.off * s.upper[i - 1];
    s.upper[i] = s.off / s.pivot[i];
  }
  s.z.assign(n, Complex(0.0));
  s.z[0] = s.gamma;
  s.z[n - 1] = s.off;
  s.thomas(s.z);
  s.denom = 1.0 + s.z[0] + s.off * s.z[n - 1] / s.gamma;
  s.rhs.resize(n);
}

SchrodingerStepper::~SchrodingerStepper() = default;
SchrodingerStepper::SchrodingerStepper(SchrodingerStepper&&) noexcept = default;
SchrodingerStepper& SchrodingerStepper::operator=(SchrodingerStepper&&) noexcept = default;

void SchrodingerStepper::unitary_step(WaveFunction1D& psi) {
  auto& s = *impl_;
  const std::size_t n = grid_.n;
  if (hamiltonian_.kind == HamiltonianSpec::Kind::spectral_free) {
    std::memcpy(s.buffer, psi.amps.data(), n * sizeof(Complex));
    fftw_execute(s.forward);
    kernels::multiply({reinterpret_cast<Complex*>(s.buffer), n}, s.phase);
    fftw_execute(s.backward);
    std::memcpy(static_cast<void*>(psi.amps.data()), s.buffer, n * sizeof(Complex));
    return;
  }
  const auto& a = psi.amps;
  const Complex minus_off = -s.off;  // off-diagonal of (1 - beta H)
  for (std::size_t i = 0; i < n; ++i) {
    const Complex left = a[(i + n - 1) % n];
    const Complex right = a[(i + 1) % n];
    s.rhs[i] = s.diag_rhs[i] * a[i] + minus_off * (left + right);
  }
  s.thomas(s.rhs);
  const Complex fact = (s.rhs[0] + s.off * s.rhs[n - 1] / s.gamma) / s.denom;
  for (std::size_t i = 0; i < n; ++i) psi.amps[i] = s.rhs[i] - fact * s.z[i];
}

void SchrodingerStepper::step(WaveFunction1D& psi) {
  if (psi.grid.n != grid_.n || psi.amps.size() != grid_.n || psi.grid.spacing != grid_.spacing)
    fail(ErrorCode::InvalidArgument, "wave function grid does not match the stepper");
  const double t0 = psi.t, t1 = psi.t + dt_, mid = psi.t + 0.5 * dt_;
  kernels::scale(psi.amps, std::exp(-scaling_.integral(t0, mid)));
  const double before = kernels::norm_sq(psi.amps);
  unitary_step(psi);
  const double after = kernels::norm_sq(psi.amps);
  if (!std::isfinite(after) || std::fabs(after - before) > kUnitarityTol * before)
    fail(ErrorCode::StepUnstable, "unitary substep changed the norm");
  kernels::scale(psi.amps, std::exp(-scaling_.integral(mid, t1)));
  psi.t = t1;
}

WaveFunction1D schrodinger_step(const WaveFunction1D& psi, const HamiltonianSpec& hamiltonian,
                                const TimeScaling& scaling, double dt) {
  SchrodingerStepper stepper(hamiltonian, scaling, dt, psi.grid);
  WaveFunction1D out = psi;
  stepper.step(out);
  return out;
}

Complex free_particle_effective_energy(double energy, double rate, double hbar) { return {energy, hbar * rate}; }

void write_snapshot_csv(std::ostream& out, const WaveFunction1D& psi, bool header) {
  CsvWriter csv(out);
  if (header) csv.header({"t", "y", "re_psi", "im_psi", "prob_density"});
  for (std::size_t i = 0; i < psi.amps.size(); ++i)
    csv.row({psi.t, psi.grid.y(i), psi.amps[i].real(), psi.amps[i].imag(), std::norm(psi.amps[i])});
}

}  // namespace localmath
