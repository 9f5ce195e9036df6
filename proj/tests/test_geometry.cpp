#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "localmath/error.hpp"
#include "localmath/geometry.hpp"

using namespace localmath;

namespace {

constexpr double c_si = constants::speed_of_light;

AlphaField wavy_field(double scale = 1.0) {
  return AlphaField::analytic(
      [=](const SpacetimePoint& p) {
        return scale * (0.03 * std::sin(p[1]) + 0.02 * std::sin(p[2]) * std::cos(p[3]) - 0.02 * p.t());
      },
      [=](const SpacetimePoint& p) {
        return GradientVector{{-0.02 * scale, 0.03 * scale * std::cos(p[1]), 0.02 * scale * std::cos(p[2]) * std::cos(p[3]), -0.02 * scale * std::sin(p[2]) * std::sin(p[3])}};
      });
}

// Timelike four-velocity for coordinate velocity v (c = 1 unless given).
FourVector boosted(double vx, double vy, double vz, double c = 1.0) {
  const double g = 1.0 / std::sqrt(1.0 - (vx * vx + vy * vy + vz * vz) / (c * c));
  return {g * c, g * vx, g * vy, g * vz};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("metric examples") {
  const auto p = SpacetimePoint::at(0, 1), q = SpacetimePoint::at(0, 2);
  CHECK(metric_at(AlphaField::constant(0.4), p, q).diag == kMinkowski);
  CHECK(metric_at(wavy_field(), p, p).diag == kMinkowski);
  const auto ln2 = AlphaField::linear(0.0, {0.0, std::log(2.0), 0.0, 0.0});
  const auto m = metric_at(ln2, p, q);
  CHECK(m.diag[0] == doctest::Approx(-2.0).epsilon(1e-15));
  for (int i = 1; i < 4; ++i) CHECK(m.diag[i] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("geodesic rhs examples") {
  const GeodesicState rest{SpacetimePoint::at(0), {c_si, 0, 0, 0}};
  for (auto v : geodesic_rhs(AlphaField::constant(1.0), rest, c_si)) CHECK(v == 0.0);

  const double a0 = 2.3e-18;  // per second
  const auto time_only = AlphaField::time_only([=](double t) { return a0 * t; }, [=](double) { return a0; });
  const double a0_m = a0 / c_si;
  const auto lit = geodesic_rhs(time_only, rest, c_si, NormContraction::literal);
  CHECK(lit[0] == doctest::Approx(-1.5 * a0_m * c_si * c_si).epsilon(1e-14));
  CHECK(lit[1] == 0.0);
  const auto gen = geodesic_rhs(time_only, rest, c_si, NormContraction::general);
  CHECK(gen[0] == doctest::Approx(-0.5 * a0_m * c_si * c_si).epsilon(1e-14));

  const double k = 1e-20;
  const auto spatial = AlphaField::linear(0.0, {0.0, k, 0.0, 0.0});
  CHECK(geodesic_rhs(spatial, rest, c_si, NormContraction::literal)[1] ==
        doctest::Approx(0.5 * k * c_si * c_si).epsilon(1e-14));
  CHECK(geodesic_rhs(spatial, rest, c_si, NormContraction::general)[1] ==
        doctest::Approx(-0.5 * k * c_si * c_si).epsilon(1e-14));
  CHECK(geodesic_rhs(spatial, rest, c_si)[0] == 0.0);
}

TEST_CASE("property: rhs is linear in A") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const std::array<double, 4> slope{u(rng), u(rng), u(rng), u(rng)};
    std::array<double, 4> doubled{}, negated{};
    for (std::size_t j = 0; j < 4; ++j) {
      doubled[j] = 2.0 * slope[j];
      negated[j] = -slope[j];
    }
    const GeodesicState s{SpacetimePoint::at(u(rng), u(rng), u(rng), u(rng)), boosted(0.5 * u(rng), 0.3 * u(rng), 0.2 * u(rng))};
    for (auto mode : {NormContraction::general, NormContraction::literal}) {
      const auto r1 = geodesic_rhs(AlphaField::linear(0.0, slope), s, 1.0, mode);
      const auto r2 = geodesic_rhs(AlphaField::linear(0.0, doubled), s, 1.0, mode);
      const auto rn = geodesic_rhs(AlphaField::linear(0.0, negated), s, 1.0, mode);
      for (std::size_t j = 0; j < 4; ++j) {
        REQUIRE(r2[j] == 2.0 * r1[j]);
        REQUIRE(rn[j] == -r1[j]);
      }
    }
  }
}

TEST_CASE("constant field gives straight lines") {
  const auto field = AlphaField::constant(0.7);
  const FourVector u = boosted(0.6 * c_si, -0.2 * c_si, 0.1 * c_si, c_si);
  const GeodesicState init{SpacetimePoint::at(0, 1.0, 2.0, -3.0), u};
  IntegratorConfig cfg;
  cfg.step = 1e-4;
  cfg.span = 1.0;
  const auto traj = integrate_geodesic(field, init, cfg);
  REQUIRE(traj.size() == 10001);
  const double length = std::sqrt(u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) * cfg.span;
  double worst = 0.0;
  for (const auto& pt : traj) {
    for (int i = 1; i < 4; ++i)
      worst = std::max(worst, std::abs(pt.state.p[i] - (init.p[i] + u[static_cast<std::size_t>(i)] * pt.param)));
    CHECK(pt.state.u == u);
  }
  CHECK(worst <= 1e-9 * length);
  CHECK(traj.back().state.p.t() == doctest::Approx(u[0] / c_si).epsilon(1e-12));
}

TEST_CASE("rest particle in a time-only field follows the analytic decay") {
  // General contraction: du0/dtau = -(A / 2c) (u0)^2, so u0 = c / (1 + A tau / 2).
  const double c = 1.0, a = 0.05;
  const auto field = AlphaField::time_only([=](double t) { return a * t; }, [=](double) { return a; });
  IntegratorConfig cfg;
  cfg.c = c;
  cfg.step = 1e-2;
  cfg.span = 10.0;
  const auto traj = integrate_geodesic(field, {SpacetimePoint::at(0), {c, 0, 0, 0}}, cfg);
  for (const auto& pt : traj) {
    REQUIRE(pt.state.u[0] == doctest::Approx(c / (1.0 + 0.5 * a * pt.param)).epsilon(1e-10));
    REQUIRE(pt.state.u[1] == 0.0);
  }
  // Literal contraction: du0/dtau = -(3A / 2c) (u0)^2, checked against a fine-step run.
  cfg.mode = NormContraction::literal;
  cfg.norm_check_tol.reset();
  const auto coarse = integrate_geodesic(field, {SpacetimePoint::at(0), {c, 0, 0, 0}}, cfg);
  cfg.step /= 16;
  const auto fine = integrate_geodesic(field, {SpacetimePoint::at(0), {c, 0, 0, 0}}, cfg);
  CHECK(coarse.back().state.u[0] == doctest::Approx(fine.back().state.u[0]).epsilon(1e-9));
  // Reversing A reverses the initial acceleration.
  const auto reversed = AlphaField::time_only([=](double t) { return -a * t; }, [=](double) { return -a; });
  const GeodesicState rest{SpacetimePoint::at(0), {c, 0, 0, 0}};
  CHECK(geodesic_rhs(reversed, rest, c)[0] == -geodesic_rhs(field, rest, c)[0]);
}

TEST_CASE("scaled-metric norm is conserved along massive and null geodesics") {
  const auto field = wavy_field(5.0);
  IntegratorConfig cfg;
  cfg.c = 1.0;
  cfg.step = 1e-3;
  cfg.span = 10.0;
  const GeodesicState init{SpacetimePoint::at(0, 0.2, -0.4, 0.1), boosted(0.3, 0.4, -0.1)};
  const auto traj = integrate_geodesic(field, init, cfg);
  const double n0 = scaled_norm(field, init.p, init);
  CHECK(n0 == doctest::Approx(-1.0).epsilon(1e-14));
  double drift = 0.0;
  for (const auto& pt : traj) drift = std::max(drift, std::abs(scaled_norm(field, init.p, pt.state) - n0) / std::abs(n0));
  CHECK(drift <= 1e-6);
  CHECK(traj.size() == 10001);

  IntegratorConfig light = cfg;
  light.null_path = true;
  const GeodesicState photon{SpacetimePoint::at(0), {1.0, 0.6, 0.8, 0.0}};
  const auto ray = integrate_geodesic(field, photon, light);
  for (const auto& pt : ray) REQUIRE(std::abs(scaled_norm(field, photon.p, pt.state)) <= 1e-6 * pt.state.u[0] * pt.state.u[0]);
}

TEST_CASE("proper-time and coordinate-time integrations agree") {
  const auto field = wavy_field(5.0);
  const GeodesicState init{SpacetimePoint::at(0, 0.2, -0.4, 0.1), boosted(0.3, 0.4, -0.1)};
  IntegratorConfig cfg;
  cfg.c = 1.0;
  cfg.step = 1e-3;
  cfg.span = 8.0;
  const auto proper = integrate_geodesic(field, init, cfg);
  IntegratorConfig coord = cfg;
  coord.span = proper.back().state.p.t();
  const auto by_time = integrate_coordinate_time(field, init, coord);
  const auto& a = proper.back().state;
  const auto& b = by_time.back().state;
  CHECK(b.p.t() == doctest::Approx(a.p.t()).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(b.p[i] == doctest::Approx(a.p[i]).epsilon(1e-6));
  for (std::size_t i = 0; i < 4; ++i) CHECK(b.u[i] == doctest::Approx(a.u[i]).epsilon(1e-6));
  CHECK(by_time.back().gamma == doctest::Approx(proper.back().gamma).epsilon(1e-6));
}

TEST_CASE("coordinate-time rhs examples") {
  const ParticleSpec particle{1.0, c_si};
  const FourVector at_rest{c_si, 0, 0, 0};
  for (auto v : coordinate_time_rhs(AlphaField::constant(2.0), SpacetimePoint::at(0), at_rest, 1.0, particle)) CHECK(v == 0.0);
  const double a0 = 1e-10;
  const auto field = AlphaField::time_only([=](double t) { return a0 * t; }, [=](double) { return a0; });
  const auto lit = coordinate_time_rhs(field, SpacetimePoint::at(0), at_rest, 1.0, particle, NormContraction::literal);
  CHECK(lit[0] == doctest::Approx(-a0 * c_si - 0.5 * (a0 / c_si) * c_si * c_si).epsilon(1e-14));
  const auto gen = coordinate_time_rhs(field, SpacetimePoint::at(0), at_rest, 1.0, particle);
  CHECK(gen[0] == doctest::Approx(-0.5 * a0 * c_si).epsilon(1e-14));
  CHECK(code_of([&] { coordinate_time_rhs(field, SpacetimePoint::at(0), at_rest, 0.0, particle); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("energy rate") {
  const ParticleSpec p1{1.0, 1.0}, p2{2.0, 1.0};
  const FourVector v{1.0, 0.3, -0.2, 0.1};
  const double gamma = 1.0 / std::sqrt(1.0 - 0.14);
  const auto zero = energy_rate(AlphaField::constant(1.0), SpacetimePoint::at(0), v, gamma * p1.rest_energy(), p1);
  CHECK(zero.dE_ds == 0.0);
  CHECK(zero.dgamma_ds == 0.0);

  const auto field = wavy_field(3.0);
  const auto where = SpacetimePoint::at(0.5, 0.1, 0.2, 0.3);
  const auto r1 = energy_rate(field, where, v, gamma * p1.rest_energy(), p1);
  const auto r2 = energy_rate(field, where, v, gamma * p2.rest_energy(), p2);
  CHECK(r1.dgamma_ds == r2.dgamma_ds);
  CHECK(r2.dE_ds == doctest::Approx(2.0 * r1.dE_ds).epsilon(1e-15));
  CHECK(code_of([&] { energy_rate(field, where, v, 0.5, p1); }) == ErrorCode::InvalidEnergy);
}

TEST_CASE("energy rate matches the differenced coordinate-time integrator") {
  // The energy formula assumes the eta normalization gamma^2 eta p' p' = -c^2.
  // A spatial-only field keeps the A_0 term out, so it holds along the whole run.
  const auto spatial = AlphaField::analytic(
      [](const SpacetimePoint& p) { return 0.15 * std::sin(p[1]) + 0.1 * std::cos(p[2]); },
      [](const SpacetimePoint& p) { return GradientVector{{0.0, 0.15 * std::cos(p[1]), -0.1 * std::sin(p[2]), 0.0}}; });
  IntegratorConfig cfg;
  cfg.c = 1.0;
  cfg.step = 1e-3;
  cfg.span = 2.0;
  const GeodesicState init{SpacetimePoint::at(0, 0.2, -0.4, 0.1), boosted(0.3, 0.4, -0.1)};
  const auto traj = integrate_coordinate_time(spatial, init, cfg);
  const ParticleSpec particle{3.0, 1.0};
  for (std::size_t i : {200u, 1000u, 1800u}) {
    const auto& pt = traj[i];
    const double h = traj[i + 1].param - traj[i].param;
    const double dgamma_fd = (traj[i + 1].gamma - traj[i - 1].gamma) / (2 * h);
    const FourVector dpds{1.0, pt.state.u[1] / pt.gamma, pt.state.u[2] / pt.gamma, pt.state.u[3] / pt.gamma};
    const auto rate = energy_rate(spatial, pt.state.p, dpds, pt.gamma * particle.rest_energy(), particle);
    CHECK(rate.dgamma_ds == doctest::Approx(dgamma_fd).epsilon(1e-6));
    CHECK(rate.dE_ds == doctest::Approx(particle.rest_energy() * dgamma_fd).epsilon(1e-6));
  }

  // A particle starting at rest in a time-only field, differenced at s = 0.
  const double a0 = 0.02;
  const auto time_only = AlphaField::time_only([=](double t) { return a0 * t; }, [=](double) { return a0; });
  cfg.step = 1e-4;
  cfg.span = 1e-3;
  const auto rest = integrate_coordinate_time(time_only, {SpacetimePoint::at(0), {1.0, 0, 0, 0}}, cfg);
  const double h = rest[1].param;
  const double dgamma_fd = (-3.0 * rest[0].gamma + 4.0 * rest[1].gamma - rest[2].gamma) / (2 * h);
  const auto rate = energy_rate(time_only, SpacetimePoint::at(0), {1.0, 0, 0, 0}, particle.rest_energy(), particle);
  CHECK(rate.dgamma_ds == doctest::Approx(-0.5 * a0).epsilon(1e-14));
  CHECK(rate.dgamma_ds == doctest::Approx(dgamma_fd).epsilon(1e-6));
}

TEST_CASE("energy rate equals the temporal coordinate-time rhs on eta-normalized states") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto field = wavy_field(3.0);
  const ParticleSpec particle{1.7, 1.0};
  for (int i = 0; i < 200; ++i) {
    const auto p = SpacetimePoint::at(u(rng), u(rng), u(rng), u(rng));
    const FourVector w = boosted(0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng));
    const double gamma = w[0];
    const FourVector dpds{1.0, w[1] / gamma, w[2] / gamma, w[3] / gamma};
    const auto rhs = coordinate_time_rhs(field, p, dpds, gamma, particle);
    const auto rate = energy_rate(field, p, dpds, gamma * particle.rest_energy(), particle);
    REQUIRE(rate.dgamma_ds == doctest::Approx(rhs[0]).epsilon(1e-12));
  }
}

TEST_CASE("integrator failures") {
  IntegratorConfig cfg;
  cfg.c = 1.0;
  cfg.step = 0.1;
  cfg.span = 10.0;
  Box4 box;
  box.hi[1] = 1.0;
  const auto bounded = AlphaField::analytic([](const SpacetimePoint&) { return 0.0; },
                                            [](const SpacetimePoint&) { return GradientVector{}; }, box);
  CHECK(code_of([&] { integrate_geodesic(bounded, {SpacetimePoint::at(0), boosted(0.5, 0, 0)}, cfg); }) ==
        ErrorCode::LeftDomain);

  cfg.norm_check_tol = 1e-15;
  cfg.max_halvings = 2;
  CHECK(code_of([&] { integrate_geodesic(wavy_field(50.0), {SpacetimePoint::at(0), boosted(0.5, 0.3, 0)}, cfg); }) ==
        ErrorCode::StepUnstable);
  cfg.step = -1.0;
  CHECK(code_of([&] { integrate_geodesic(wavy_field(), {SpacetimePoint::at(0), boosted(0.5, 0, 0)}, cfg); }) ==
        ErrorCode::InvalidArgument);
}
