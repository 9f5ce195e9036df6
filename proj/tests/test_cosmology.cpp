#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "localmath/cosmology.hpp"
#include "localmath/error.hpp"

using namespace localmath;

namespace {

// Frozen from 40-digit evaluations of the unit conversions.
constexpr double kH70PerSecond = 2.26852902097e-18;
constexpr double kH70PerYear = 7.15893314321e-11;
constexpr double kRhoCrit70 = 9.20374018581e-27;
constexpr double kH100PerSecond = 3.24075574424e-18;
constexpr double kH100PerYear = 1.02270473474e-10;
constexpr double kRhoCrit100 = 1.87831432364e-26;
constexpr double kZExact100Myr = 0.00718293810803;

const double kPi = constants::pi;

CosmologyParams only(double om, double orad, double ov) {
  CosmologyParams p;
  p.omega_m = om;
  p.omega_r = orad;
  p.omega_v = ov;
  return p;
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

TEST_CASE("H0 conversion") {
  const auto h70 = h0_convert(70.0);
  CHECK(h70.per_second == doctest::Approx(kH70PerSecond).epsilon(1e-11));
  CHECK(h70.per_year == doctest::Approx(kH70PerYear).epsilon(1e-11));
  CHECK(std::round(h70.per_year * 1e13) / 100 == 7.16);
  CHECK(std::round(h70.per_second * 1e19) / 10 == 2.3);
  const auto h100 = h0_convert(100.0);
  CHECK(h100.per_second == doctest::Approx(kH100PerSecond).epsilon(1e-11));
  CHECK(h100.per_year == doctest::Approx(kH100PerYear).epsilon(1e-11));
  CHECK(code_of([] { h0_convert(0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("parameter diagnostics") {
  CHECK(CosmologyParams{}.diagnostics().empty());
  auto open = only(0.3, 0.0, 0.6);
  const auto d = open.diagnostics();
  REQUIRE(d.size() == 1);
  CHECK(d[0].find("flatness") != std::string::npos);
  open.require_flat = false;
  CHECK(open.diagnostics().empty());
  CosmologyParams neg;
  neg.h0_km_s_mpc = -70;
  CHECK_FALSE(neg.diagnostics().empty());
}

TEST_CASE("critical density") {
  CosmologyParams p;
  CHECK(critical_density(p) == doctest::Approx(kRhoCrit70).epsilon(1e-11));
  p.h0_km_s_mpc = 100;
  CHECK(critical_density(p) == doctest::Approx(kRhoCrit100).epsilon(1e-11));
  p.h0_km_s_mpc = 140;
  CHECK(critical_density(p) == doctest::Approx(4 * critical_density(CosmologyParams{})).epsilon(1e-15));
  p = CosmologyParams{};
  p.G *= 2;
  CHECK(critical_density(p) == doctest::Approx(0.5 * kRhoCrit70).epsilon(1e-11));
}

TEST_CASE("scale factor and Hubble rate of single-era profiles") {
  const double t_now = CosmologyParams{}.t_now_seconds();
  const auto matter = AlphaProfile::pure_matter(t_now);
  CHECK(scale_factor(matter, t_now) == 1.0);
  CHECK(scale_factor(matter, 0.1 * t_now) / scale_factor(matter, 0.4 * t_now) ==
        doctest::Approx(std::pow(0.25, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(scale_factor(matter, 1e-20 * t_now) < 1e-13);
  CHECK(hubble(matter, 0.3 * t_now).value() == doctest::Approx(2.0 / (3.0 * 0.3 * t_now)).epsilon(1e-14));
  const auto radiation = AlphaProfile::pure_radiation(t_now);
  CHECK(hubble(radiation, 0.3 * t_now).value() == doctest::Approx(1.0 / (2.0 * 0.3 * t_now)).epsilon(1e-14));
  const double h0 = CosmologyParams{}.h0_per_second();
  const auto lin = AlphaProfile::linear_hubble(h0, t_now);
  CHECK(lin.alpha(t_now) == 0.0);
  CHECK(hubble(lin, 0.5 * t_now).value() == h0);
  CHECK(code_of([&] { matter.alpha(0.0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { matter.alpha(1.01 * t_now); }) == ErrorCode::OutOfRange);
}

TEST_CASE("hubble equals the centered difference of -alpha") {
  const auto profile = build_alpha_profile(CosmologyParams{});
  const double year = constants::julian_year;
  for (double s_years : {1e3, 3e6, 5e9, 12e9}) {
    const double s = s_years * year, h = 1e-4 * s;
    const double fd = -(profile.alpha(s + h) - profile.alpha(s - h)) / (2 * h);
    CHECK(hubble(profile, s).value() == doctest::Approx(fd).epsilon(1e-7));
    const double da = (scale_factor(profile, s + h) - scale_factor(profile, s - h)) / (2 * h);
    CHECK(hubble(profile, s).value() == doctest::Approx(da / scale_factor(profile, s)).epsilon(1e-7));
  }
}

TEST_CASE("hubble at a segment boundary is one-sided") {
  const auto profile = build_alpha_profile(CosmologyParams{});
  const double s_de = 1e10 * constants::julian_year;
  const auto h = hubble(profile, s_de);
  CHECK(h.at_boundary);
  CHECK(h.left == doctest::Approx(2.0 / (3.0 * s_de)).epsilon(1e-12));
  CHECK(h.right == doctest::Approx(CosmologyParams{}.h0_per_second()).epsilon(1e-12));
  CHECK(code_of([&] { h.value(); }) == ErrorCode::AtSegmentBoundary);
}

TEST_CASE("built profile shape") {
  const CosmologyParams params;
  const auto profile = build_alpha_profile(params);
  const double t_now = params.t_now_seconds();
  CHECK(profile.segments().size() == 3);
  CHECK(profile.alpha(t_now) == 0.0);
  double prev = profile.alpha(1e-6 * t_now);
  for (int i = 1; i <= 4000; ++i) {
    const double s = t_now * std::pow(10.0, -6.0 + 6.0 * i / 4000.0);
    const double a = profile.alpha(s);
    REQUIRE(a <= prev);
    REQUIRE(profile.gradient(s) < 0.0);
    prev = a;
  }
  for (std::size_t i = 0; i + 1 < profile.segments().size(); ++i) {
    const double b = profile.segments()[i].s_end;
    CHECK(profile.segments()[i].alpha(b) == doctest::Approx(profile.segments()[i + 1].alpha(b)).epsilon(1e-14));
  }
  const double s_de = 1e10 * constants::julian_year;
  CHECK(profile.segments()[2].gradient(s_de) < profile.segments()[1].gradient(s_de));
  CHECK(profile.alpha(1e-30 * t_now) > 30.0);
  EraBoundaries bad;
  bad.radiation_to_matter_years = 2e10;
  CHECK(code_of([&] { build_alpha_profile(params, bad); }) == ErrorCode::InvalidBoundaries);
}

TEST_CASE("wavelength and redshift") {
  const CosmologyParams params;
  const auto profile = build_alpha_profile(params);
  const double t_now = params.t_now_seconds();
  CHECK(wavelength_at_reception(500e-9, profile, 0.5 * t_now, 0.5 * t_now) == 500e-9);
  CHECK(redshift(profile, 0.5 * t_now, 0.5 * t_now) == 0.0);
  for (double s_emit : {1e-5, 0.01, 0.3, 0.8}) {
    const double e = s_emit * t_now;
    CHECK(1.0 + redshift(profile, e, t_now) ==
          doctest::Approx(scale_factor(profile, t_now) / scale_factor(profile, e)).epsilon(1e-12));
    CHECK(wavelength_at_reception(1.0, profile, e, t_now) == doctest::Approx(1.0 + redshift(profile, e, t_now)).epsilon(1e-14));
  }
  const auto doubling = AlphaProfile::linear_hubble(std::log(2.0) / (0.5 * t_now), t_now);
  CHECK(wavelength_at_reception(1.0, doubling, 0.5 * t_now, t_now) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(code_of([&] { redshift(profile, 0.6 * t_now, 0.5 * t_now); }) == ErrorCode::OutOfRange);
}

TEST_CASE("redshift linearization for nearby sources") {
  const double h0 = 2.268e-18, t_now = CosmologyParams{}.t_now_seconds();
  const auto lin = AlphaProfile::linear_hubble(h0, t_now);
  const double dt = 100e6 * constants::julian_year;
  const double z = redshift(lin, t_now - dt, t_now);
  CHECK(z == doctest::Approx(kZExact100Myr).epsilon(1e-10));
  CHECK(std::abs(z - h0 * dt) / z < 0.005);
  const double step = 1e6 * constants::julian_year;
  const double dzdt = (redshift(lin, t_now - 2 * step, t_now) - redshift(lin, t_now - step, t_now)) / step;
  CHECK(dzdt == doctest::Approx(h0).epsilon(0.01));
}

TEST_CASE("density") {
  const CosmologyParams params;
  const double t_now = params.t_now_seconds();
  const auto profile = build_alpha_profile(params);
  CHECK(density(profile, t_now, params) == doctest::Approx(critical_density(params)).epsilon(1e-12));
  const auto matter = AlphaProfile::pure_matter(t_now);
  const auto pm = only(1.0, 0.0, 0.0);
  const double s_half = t_now * std::pow(0.5, 1.5);  // a = 1/2
  CHECK(density(matter, s_half, pm) / density(matter, t_now, pm) == doctest::Approx(8.0).epsilon(1e-12));
  const auto radiation = AlphaProfile::pure_radiation(t_now);
  const auto pr = only(0.0, 1.0, 0.0);
  CHECK(density(radiation, 0.25 * t_now, pr) / density(radiation, t_now, pr) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("Friedmann residuals of era solutions") {
  const double t_now = CosmologyParams{}.t_now_seconds(), c = constants::speed_of_light;
  const auto pm = only(1.0, 0.0, 0.0), pr = only(0.0, 1.0, 0.0);
  const auto matter = AlphaProfile::pure_matter(t_now);
  const auto radiation = AlphaProfile::pure_radiation(t_now);
  for (double f : {1e-3, 0.1, 0.5, 0.99}) {
    const double s = f * t_now;
    const double rho_m = density(matter, s, pm);
    const auto rm = friedmann_residuals(matter, s, rho_m, 0.0, pm);
    CHECK(std::abs(rm.r1_relative()) <= 1e-9);
    CHECK(std::abs(rm.r2_relative()) <= 1e-9);
    CHECK(std::abs(rm.r3_relative()) <= 1e-9);
    CHECK(rm.acceleration < 0.0);
    const double rho_r = density(radiation, s, pr);
    const auto rr = friedmann_residuals(radiation, s, rho_r, rho_r * c * c / 3.0, pr);
    CHECK(std::abs(rr.r1_relative()) <= 1e-9);
    CHECK(std::abs(rr.r2_relative()) <= 1e-9);
    CHECK(std::abs(rr.r3_relative()) <= 1e-9);
  }
  // The literal deceleration form is off by c^2 for any nonzero pressure.
  const double s = 0.5 * t_now, rho_r = density(radiation, s, pr);
  const auto literal = friedmann_residuals(radiation, s, rho_r, rho_r * c * c / 3.0, pr, DecelerationForm::literal);
  CHECK(std::abs(literal.r3_relative()) > 0.5);
}

TEST_CASE("vacuum era has constant rate") {
  const CosmologyParams params;
  const double t_now = params.t_now_seconds(), c = params.c;
  const auto vac = AlphaProfile::linear_hubble(params.h0_per_second(), t_now);
  const double rho = critical_density(params);
  const auto r = friedmann_residuals(vac, 0.7 * t_now, rho, -rho * c * c, params);
  CHECK(r.gradient_rate == 0.0);
  CHECK(std::abs(r.r3) <= 1e-12 * r.r3_scale);
  CHECK(std::abs(r.r1_relative()) <= 1e-12);
  CHECK(r.acceleration > 0.0);
}

TEST_CASE("r3 is bitwise invariant under the cosmological constant") {
  const double t_now = CosmologyParams{}.t_now_seconds();
  const auto matter = AlphaProfile::pure_matter(t_now);
  auto p = only(1.0, 0.0, 0.0);
  const double s = 0.4 * t_now, rho = density(matter, s, p);
  const auto base = friedmann_residuals(matter, s, rho, 1e-3, p);
  for (double lambda : {1e-52, 1.1e-52, 3e-50, -2e-52}) {
    p.lambda = lambda;
    const auto with = friedmann_residuals(matter, s, rho, 1e-3, p);
    CHECK(std::memcmp(&with.r3, &base.r3, sizeof(double)) == 0);
    CHECK(with.r1 == doctest::Approx(base.r1 - lambda * p.c * p.c / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("era alpha") {
  const CosmologyParams params;
  const double t_now = params.t_now_seconds();
  const EraSpec matter{EraKind::matter, 1.0, t_now, std::nullopt};
  const EraAnchor anchor{1e15, 0.75};
  CHECK(era_alpha(matter, 1e15, anchor, params) == 0.75);
  CHECK(era_alpha(matter, 8e15, anchor, params) == doctest::Approx(0.75 - 2 * std::log(2.0)).epsilon(1e-15));
  const EraSpec radiation{EraKind::radiation, 1.0, t_now, std::nullopt};
  CHECK(era_alpha(radiation, 4e15, anchor, params) == doctest::Approx(0.75 - std::log(2.0)).epsilon(1e-15));
  const EraSpec vacuum{EraKind::vacuum, 0.5 * t_now, t_now, std::nullopt};
  CHECK(era_alpha(vacuum, t_now, anchor, params) == 0.0);
  CHECK(era_alpha(vacuum, 0.5 * t_now, anchor, params) ==
        doctest::Approx(params.h0_per_second() * 0.5 * t_now).epsilon(1e-12));
  CHECK(code_of([&] { era_alpha(vacuum, 0.1 * t_now, anchor, params); }) == ErrorCode::OutOfRange);
}

TEST_CASE("numerical Friedmann integration recovers the era exponents") {
  const double G = constants::gravitational_constant;
  const double t_now = CosmologyParams{}.t_now_seconds();
  const double s0 = 1e-3 * t_now;
  const auto m = integrate_friedmann(DensityModel::matter, 1.0 / (6 * kPi * G * t_now * t_now), s0,
                                     std::pow(1e-3, 2.0 / 3.0), t_now, 2000, G);
  CHECK(std::abs(loglog_slope(m.s, m.a) - 2.0 / 3.0) <= 1e-3);
  CHECK(m.a.back() == doctest::Approx(1.0).epsilon(1e-6));
  const auto r = integrate_friedmann(DensityModel::radiation, 3.0 / (32 * kPi * G * t_now * t_now), s0,
                                     std::sqrt(1e-3), t_now, 2000, G);
  CHECK(std::abs(loglog_slope(r.s, r.a) - 0.5) <= 1e-3);
  const double rho_v = critical_density(CosmologyParams{});
  const auto v = integrate_friedmann(DensityModel::vacuum, rho_v, s0, 1.0, t_now, 2000, G);
  const double rate = std::sqrt(8 * kPi * G * rho_v / 3);
  CHECK(std::abs(exponential_rate(v.s, v.a) / rate - 1.0) <= 1e-6);
}

TEST_CASE("local bound check") {
  const CosmologyParams params;
  const double t_now = params.t_now_seconds();
  const auto constant = local_bound_check(AlphaField::constant(2.0), Box4{{0, 0, 0, 0}, {1, 1, 1, 1}}, SpacetimePoint::at(0));
  CHECK(constant.max_deviation == 0.0);
  CHECK(constant.pass);

  const auto lin = AlphaProfile::linear_hubble(params.h0_per_second(), t_now);
  const auto solar = local_bound_check(lin, t_now - 500.0, t_now, t_now);
  CHECK(solar.max_deviation == doctest::Approx(params.h0_per_second() * 500.0).epsilon(1e-6));
  CHECK(solar.max_deviation < 1e-10);
  CHECK(solar.pass);
  CHECK(solar.samples == kDefaultBoundSamples);

  // The same check through the field interface samples only the time axis.
  Box4 region{{t_now - 500.0, -1.5e11, -1.5e11, -1.5e11}, {t_now, 1.5e11, 1.5e11, 1.5e11}};
  const auto via_field = local_bound_check(lin.to_field(), region, SpacetimePoint::at(t_now));
  CHECK(via_field.max_deviation == doctest::Approx(solar.max_deviation).epsilon(1e-6));
  CHECK(via_field.samples == kDefaultBoundSamples);

  const double extent = 1.0;
  const auto ky = AlphaField::linear(0.0, {0.0, 0.0, 1e-9 / extent, 0.0});
  const auto fail_case = local_bound_check(ky, Box4{{0, 0, 0, 0}, {0, 0, extent, 0}}, SpacetimePoint::at(0));
  CHECK(fail_case.max_deviation == doctest::Approx(1e-9).epsilon(1e-12));
  CHECK_FALSE(fail_case.pass);
}
