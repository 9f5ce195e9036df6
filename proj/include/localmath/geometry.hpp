#pragma once

// Geodesics of the scaled geometry with metric exp(-alpha(x_ref) + alpha(y)) * eta,
// eta = diag(-1, 1, 1, 1). The geometry is flat exactly when alpha is constant.
//
// Four-velocity convention: u^0 = c dt/dtau (m/s), u^i = dx^i/dtau, so a
// particle at rest has u = (c, 0, 0, 0). Position keeps t in seconds.

#include <array>
#include <optional>
#include <vector>

#include "localmath/constants.hpp"
#include "localmath/value_field.hpp"

namespace localmath {

using FourVector = std::array<double, 4>;

inline constexpr std::array<double, 4> kMinkowski{-1.0, 1.0, 1.0, 1.0};

struct MetricDiag {
  std::array<double, 4> diag{-1.0, 1.0, 1.0, 1.0};
};

MetricDiag metric_at(const AlphaField& field, const SpacetimePoint& x_ref, const SpacetimePoint& y);

/// Gradient with the temporal component converted to per meter (A_0 / c),
/// the form used in every contraction with a four-velocity.
FourVector gradient_per_meter(const GradientVector& a, double c);

/// eta_{mu mu} u^mu u^mu (summed).
double minkowski_square(const FourVector& u);

/// How the eta_{nu nu} u^nu u^nu term of the geodesic equation is evaluated.
/// `general` uses the contraction itself (-c^2 for a normalized massive
/// particle, 0 for light) and conserves the scaled-metric norm. `literal`
/// substitutes +c^2.
enum class NormContraction { general, literal };

struct GeodesicState {
  SpacetimePoint p;
  FourVector u{};
};

/// du^mu/dtau = -(A_nu u^nu) u^mu + 1/2 eta^{mu mu} A_mu X, with X the norm
/// contraction selected by `mode` and no sum over mu in the second term.
FourVector geodesic_rhs(const AlphaField& field, const GeodesicState& state, double c = constants::speed_of_light,
                        NormContraction mode = NormContraction::general);

struct IntegratorConfig {
  double step = 1e-3;  // proper-time (or coordinate-time) step, seconds
  double span = 1.0;
  double c = constants::speed_of_light;
  NormContraction mode = NormContraction::general;
  /// Relative drift allowed in g_{mu nu} u^mu u^nu before a step is halved;
  /// empty disables monitoring.
  std::optional<double> norm_check_tol = 1e-6;
  int max_halvings = 10;
  bool null_path = false;
  /// Reference location of the scaled metric (defaults to the initial point).
  std::optional<SpacetimePoint> x_ref;
  std::size_t record_every = 1;
};

struct TrajectoryPoint {
  double param = 0.0;  // tau for proper-time runs, s for coordinate-time runs
  GeodesicState state;
  double gamma = 1.0;  // dt/dtau
};

using Trajectory = std::vector<TrajectoryPoint>;

/// g_{mu nu} u^mu u^nu with g relative to x_ref.
double scaled_norm(const AlphaField& field, const SpacetimePoint& x_ref, const GeodesicState& state);

/// Fixed-step RK4 in proper time. Steps that violate the norm check are
/// retried as two half steps, recursively up to max_halvings.
Trajectory integrate_geodesic(const AlphaField& field, const GeodesicState& init, const IntegratorConfig& cfg);

// ---------------------------------------------------------------------------
// Coordinate-time form and energy.

struct ParticleSpec {
  double mass = 1.0;  // kg
  double c = constants::speed_of_light;

  double rest_energy() const { return mass * c * c; }
};

/// d/ds(gamma dp^mu/ds) = -A_nu gamma p'^nu p'^mu + 1/2 eta^{mu mu} A_mu X / gamma,
/// with p'^0 = c and X = c^2 (literal) or gamma^2 eta p' p' (general).
FourVector coordinate_time_rhs(const AlphaField& field, const SpacetimePoint& p, const FourVector& dpds, double gamma,
                               const ParticleSpec& particle, NormContraction mode = NormContraction::general);

/// RK4 in coordinate time on w = gamma dp/ds (which equals u); gamma = w^0 / c.
Trajectory integrate_coordinate_time(const AlphaField& field, const GeodesicState& init, const IntegratorConfig& cfg);

struct EnergyRate {
  double dE_ds = 0.0;
  double dgamma_ds = 0.0;
};

/// dE/ds = m c [1/2 A_0 m c^4 / E - A_mu p'^mu E / (m c)] and the
/// mass-independent dgamma/ds = 1/2 A_0 c / gamma - A_mu p'^mu gamma
/// (A_0 per meter). Requires E >= m c^2.
EnergyRate energy_rate(const AlphaField& field, const SpacetimePoint& p, const FourVector& dpds, double energy,
                       const ParticleSpec& particle);

}  // namespace localmath
