#include "localmath/geometry.hpp"

#include <cmath>
#include <string>

#include "localmath/error.hpp"

namespace localmath {

MetricDiag metric_at(const AlphaField& field, const SpacetimePoint& x_ref, const SpacetimePoint& y) {
  const double factor = transport_factor(field, x_ref, y);
  MetricDiag m;
  for (std::size_t i = 0; i < 4; ++i) m.diag[i] = factor * kMinkowski[i];
  return m;
}

FourVector gradient_per_meter(const GradientVector& a, double c) { return {a[0] / c, a[1], a[2], a[3]}; }

double minkowski_square(const FourVector& u) {
  return -u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
}

namespace {

double contract(const FourVector& a, const FourVector& v) {
  return a[0] * v[0] + a[1] * v[1] + a[2] * v[2] + a[3] * v[3];
}

}  // namespace

FourVector geodesic_rhs(const AlphaField& field, const GeodesicState& state, double c, NormContraction mode) {
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "speed of light must be positive");
  const FourVector a = gradient_per_meter(field.gradient_at(state.p), c);
  const double a_dot_u = contract(a, state.u);
  const double x = mode == NormContraction::general ? minkowski_square(state.u) : c * c;
  FourVector out{};
  for (std::size_t mu = 0; mu < 4; ++mu) out[mu] = -a_dot_u * state.u[mu] + 0.5 * kMinkowski[mu] * a[mu] * x;
  return out;
}

double scaled_norm(const AlphaField& field, const SpacetimePoint& x_ref, const GeodesicState& state) {
  return transport_factor(field, x_ref, state.p) * minkowski_square(state.u);
}

namespace {

struct Derivative {
  FourVector dp;  // dt and dx^i per unit parameter
  FourVector du;
};

GeodesicState advance_by(const GeodesicState& s, const Derivative& d, double h) {
  GeodesicState out = s;
  for (int mu = 0; mu < 4; ++mu) {
    const auto i = static_cast<std::size_t>(mu);
    out.p[mu] += h * d.dp[i];
    out.u[i] += h * d.du[i];
  }
  return out;
}

template <class Rhs>
GeodesicState rk4(const GeodesicState& s, double h, Rhs&& rhs) {
  const Derivative k1 = rhs(s);
  const Derivative k2 = rhs(advance_by(s, k1, 0.5 * h));
  const Derivative k3 = rhs(advance_by(s, k2, 0.5 * h));
  const Derivative k4 = rhs(advance_by(s, k3, h));
  GeodesicState out = s;
  for (int mu = 0; mu < 4; ++mu) {
    const auto i = static_cast<std::size_t>(mu);
    out.p[mu] += h / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    out.u[i] += h / 6.0 * (k1.du[i] + 2.0 * k2.du[i] + 2.0 * k3.du[i] + k4.du[i]);
  }
  return out;
}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) fail(ErrorCode::InvalidArgument, "integrator step must be > 0");
  if (!(cfg.span > 0.0) || !std::isfinite(cfg.span)) fail(ErrorCode::InvalidArgument, "integrator span must be > 0");
  if (!(cfg.c > 0.0)) fail(ErrorCode::InvalidArgument, "speed of light must be positive");
  if (cfg.record_every == 0) fail(ErrorCode::InvalidArgument, "record_every must be >= 1");
}

// Drives fixed-step RK4 with norm monitoring and step halving.
template <class Rhs>
Trajectory drive(const AlphaField& field, const GeodesicState& init, const IntegratorConfig& cfg, Rhs&& rhs) {
  validate(cfg);
  if (!field.contains(init.p)) fail(ErrorCode::OutOfDomain, "initial point outside the field domain");
  const SpacetimePoint x_ref = cfg.x_ref.value_or(init.p);
  const double n0 = scaled_norm(field, x_ref, init);
  const double u0_sq = init.u[0] * init.u[0];

  auto norm_ok = [&](const GeodesicState& s) {
    if (!cfg.norm_check_tol) return true;
    if (!field.contains(s.p)) return true;  // reported as LeftDomain by the caller
    const double n = scaled_norm(field, x_ref, s);
    if (!std::isfinite(n)) return false;
    if (cfg.null_path) return std::fabs(n) <= *cfg.norm_check_tol * std::max(u0_sq, s.u[0] * s.u[0]);
    return std::fabs(n - n0) <= *cfg.norm_check_tol * std::fabs(n0);
  };

  auto advance = [&](auto&& self, const GeodesicState& s, double h, int depth) -> GeodesicState {
    GeodesicState next = rk4(s, h, rhs);
    if (norm_ok(next)) return next;
    if (depth >= cfg.max_halvings)
      fail(ErrorCode::StepUnstable, "norm check failed after " + std::to_string(depth) + " step halvings");
    const GeodesicState half = self(self, s, 0.5 * h, depth + 1);
    return self(self, half, 0.5 * h, depth + 1);
  };

  const auto steps = static_cast<std::size_t>(std::ceil(cfg.span / cfg.step - 1e-9));
  const double h = cfg.span / static_cast<double>(steps);
  Trajectory out;
  out.reserve(steps / cfg.record_every + 2);
  out.push_back({0.0, init, init.u[0] / cfg.c});
  GeodesicState s = init;
  for (std::size_t k = 1; k <= steps; ++k) {
    s = advance(advance, s, h, 0);
    if (!s.p.is_finite()) fail(ErrorCode::StepUnstable, "trajectory became non-finite");
    if (!field.contains(s.p)) fail(ErrorCode::LeftDomain, "trajectory left the field domain at step " + std::to_string(k));
    if (k % cfg.record_every == 0 || k == steps)
      out.push_back({static_cast<double>(k) * h, s, s.u[0] / cfg.c});
  }
  return out;
}

}  // namespace

Trajectory integrate_geodesic(const AlphaField& field, const GeodesicState& init, const IntegratorConfig& cfg) {
  auto rhs = [&](const GeodesicState& s) {
    Derivative d;
    d.dp = {s.u[0] / cfg.c, s.u[1], s.u[2], s.u[3]};
    if (!field.contains(s.p)) fail(ErrorCode::LeftDomain, "RK4 stage left the field domain");
    d.du = geodesic_rhs(field, s, cfg.c, cfg.mode);
    return d;
  };
  return drive(field, init, cfg, rhs);
}

FourVector coordinate_time_rhs(const AlphaField& field, const SpacetimePoint& p, const FourVector& dpds, double gamma,
                               const ParticleSpec& particle, NormContraction mode) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be positive");
  const double c = particle.c;
  const FourVector a = gradient_per_meter(field.gradient_at(p), c);
  const double a_dot_v = contract(a, dpds);
  const double x = mode == NormContraction::general ? gamma * gamma * minkowski_square(dpds) : c * c;
  FourVector out{};
  for (std::size_t mu = 0; mu < 4; ++mu)
    out[mu] = -a_dot_v * gamma * dpds[mu] + 0.5 * kMinkowski[mu] * a[mu] * x / gamma;
  return out;
}

Trajectory integrate_coordinate_time(const AlphaField& field, const GeodesicState& init, const IntegratorConfig& cfg) {
  const ParticleSpec particle{1.0, cfg.c};
  auto rhs = [&](const GeodesicState& s) {
    const double gamma = s.u[0] / cfg.c;
    if (!(gamma > 0.0)) fail(ErrorCode::StepUnstable, "gamma became non-positive");
    const FourVector dpds{cfg.c, s.u[1] / gamma, s.u[2] / gamma, s.u[3] / gamma};
    if (!field.contains(s.p)) fail(ErrorCode::LeftDomain, "RK4 stage left the field domain");
    Derivative d;
    d.dp = {1.0, dpds[1], dpds[2], dpds[3]};
    d.du = coordinate_time_rhs(field, s.p, dpds, gamma, particle, cfg.mode);
    return d;
  };
  return drive(field, init, cfg, rhs);
}

EnergyRate energy_rate(const AlphaField& field, const SpacetimePoint& p, const FourVector& dpds, double energy,
                       const ParticleSpec& particle) {
  if (!(particle.mass > 0.0) || !(particle.c > 0.0)) fail(ErrorCode::InvalidArgument, "particle needs m > 0, c > 0");
  const double m = particle.mass, c = particle.c;
  if (!(energy >= m * c * c)) fail(ErrorCode::InvalidEnergy, "energy below rest energy");
  const FourVector a = gradient_per_meter(field.gradient_at(p), c);
  const double a_dot_v = contract(a, dpds);
  const double gamma = energy / (m * c * c);
  EnergyRate r;
  r.dE_ds = m * c * (0.5 * a[0] * m * c * c * c * c / energy - a_dot_v * energy / (m * c));
  r.dgamma_ds = 0.5 * a[0] * c / gamma - a_dot_v * gamma;
  return r;
}

}  // namespace localmath
