#include <cmath>
#include <cstring>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "localmath/constants.hpp"
#include "localmath/cosmology.hpp"
#include "localmath/csv.hpp"
#include "localmath/error.hpp"
#include "localmath/geometry.hpp"
#include "localmath/quantum.hpp"
#include "localmath/scaled_numbers.hpp"
#include "localmath/value_field.hpp"
#include "scenarios.hpp"

namespace localmath::cli {

namespace {

using P = ParamType;

void require_positive(const Settings& s, const std::string& key, std::vector<std::string>& diags) {
  if (!(s.num(key) > 0.0)) diags.push_back(s.qualified(key) + ": must be > 0");
}

void require_one_of(const Settings& s, const std::string& key, std::initializer_list<const char*> options,
                    std::vector<std::string>& diags) {
  const std::string v = s.text(key);
  std::string list;
  for (const char* o : options) {
    if (v == o) return;
    list += (list.empty() ? "" : ", ") + std::string(o);
  }
  diags.push_back(s.qualified(key) + ": expected one of " + list + ", got '" + v + "'");
}

void require_min(const Settings& s, const std::string& key, long long min, std::vector<std::string>& diags) {
  if (s.integer(key) < min) diags.push_back(s.qualified(key) + ": must be >= " + std::to_string(min));
}

// ---------------------------------------------------------------------------
// arithmetic-check

Rational random_rational(std::mt19937_64& rng, long long max_num, long long max_den, bool positive) {
  // Raw engine output with modulo keeps the sequence identical across standard libraries.
  const auto span = static_cast<std::uint64_t>(max_num);
  long long num = positive ? 1 + static_cast<long long>(rng() % span)
                           : static_cast<long long>(rng() % (2 * span + 1)) - max_num;
  if (num == 0) num = 1;
  const long long den = 1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(max_den));
  return Rational(num) / Rational(den);
}

void validate_arithmetic(const Settings& s, std::vector<std::string>& d) {
  require_min(s, "cases", 1, d);
  require_min(s, "max_numerator", 1, d);
  require_min(s, "max_denominator", 1, d);
  require_min(s, "natural_max_n", 1, d);
  require_min(s, "natural_max_m", 1, d);
  require_min(s, "table_rows", 0, d);
}

void run_arithmetic(const Settings& s, Output& out, RunReport& report) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(s.integer("seed")));
  const long long max_num = s.integer("max_numerator"), max_den = s.integer("max_denominator");
  const std::size_t cases = s.count("cases"), table_rows = s.count("table_rows");

  auto table_file = out.open("commutation.csv");
  CsvWriter table(table_file);
  table.header({"s", "t", "op", "a", "b", "transport_of_combo", "combo_of_transports", "ratio"});

  double raw_fail = 0, comp_fail = 0, zero_fail = 0, mul_fail = 0, div_fail = 0, add_fail = 0, axiom_fail = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    using Q = Rational;
    const ScaleFactor<Q> sf(random_rational(rng, max_num, max_den, true));
    const ScaleFactor<Q> tf(random_rational(rng, max_num, max_den, true));
    const ScaleFactor<Q> uf(random_rational(rng, max_num, max_den, true));
    const Q a = random_rational(rng, max_num, max_den, false);
    const Q b = random_rational(rng, max_num, max_den, false);
    const Q c = random_rational(rng, max_num, max_den, false);
    const ScaledNumber<Q> x(a, tf);

    if (connect_value(sf, tf, x).raw() != x.raw()) ++raw_fail;
    if (connect_value(uf, sf, connect_value(sf, tf, x)) != connect_value(uf, tf, x)) ++comp_fail;
    if (connect_value(sf, tf, ScaledNumber<Q>(Q(0), tf)).value() != 0) ++zero_fail;

    const Q up = tf.value() / sf.value();
    const auto mul = commutation_table(sf, tf, ArithOp::mul, a, b);
    const auto div = commutation_table(sf, tf, ArithOp::div, a, b);
    const auto add = commutation_table(sf, tf, ArithOp::add, a, b);
    const auto sub = commutation_table(sf, tf, ArithOp::sub, a, b);
    if (!mul.ratio || *mul.ratio != up) ++mul_fail;
    if (!div.ratio || *div.ratio != 1 / up || div.combo_of_transports != a / b) ++div_fail;
    if (!add.ratio || *add.ratio != 1 || !sub.ratio || *sub.ratio != 1) ++add_fail;

    const Q r1 = a * sf.value(), r2 = b * sf.value(), r3 = c * sf.value();
    const bool axioms = raw_mul(sf, raw_add(sf, r1, r2), r3) == raw_add(sf, raw_mul(sf, r1, r3), raw_mul(sf, r2, r3)) &&
                        raw_mul(sf, raw_mul(sf, r1, r2), r3) == raw_mul(sf, r1, raw_mul(sf, r2, r3)) &&
                        raw_mul(sf, r1, r2) == raw_mul(sf, r2, r1) && raw_mul(sf, r1, sf.value()) == r1 &&
                        raw_mul(sf, raw_div(sf, r1, r2), r2) == r1;
    if (!axioms) ++axiom_fail;

    if (i < table_rows) {
      for (const auto& [op, row] : {std::pair{ArithOp::add, add}, {ArithOp::mul, mul}, {ArithOp::div, div}}) {
        table.row_text({sf.value().str(), tf.value().str(), to_string(op), a.str(), b.str(), row.transport_of_combo.str(),
                        row.combo_of_transports.str(), row.ratio ? row.ratio->str() : ""});
      }
    }
  }

  double val_fail = 0;
  const auto max_n = static_cast<std::uint64_t>(s.integer("natural_max_n"));
  const auto max_m = static_cast<std::uint64_t>(s.integer("natural_max_m"));
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    const NaturalStructure ns(n);
    const std::uint64_t stride = n * std::max<std::uint64_t>(1, max_m / (40 * n));
    for (std::uint64_t m1 = 0; m1 <= max_m; m1 += stride)
      for (std::uint64_t m2 = n; m2 <= max_m; m2 += stride + n) {
        const auto sum = natural_op(ns, NaturalOp::add, m1, m2);
        const auto prod = natural_op(ns, NaturalOp::mul, m1, m2);
        if (valuation_natural(ns, sum) != valuation_natural(ns, m1) + valuation_natural(ns, m2) ||
            valuation_natural(ns, prod) != valuation_natural(ns, m1) * valuation_natural(ns, m2))
          ++val_fail;
      }
  }

  auto check = [&](const char* name, double failures) {
    report.checks.push_back(evaluate_check(name, Comparison::at_most, 0.0, failures, s.tolerance(name)));
  };
  check("raw_preservation", raw_fail);
  check("composition_law", comp_fail);
  check("zero_fixed_point", zero_fail);
  check("mul_mismatch_ratio", mul_fail);
  check("div_mismatch_ratio", div_fail);
  check("add_mismatch_ratio", add_fail);
  check("structure_axioms", axiom_fail);
  check("valuation_homomorphism", val_fail);
}

// ---------------------------------------------------------------------------
// field-calculus

void validate_field(const Settings& s, std::vector<std::string>& d) {
  require_positive(s, "sigma", d);
  if (!(s.num("lo") < s.num("hi"))) d.push_back(s.qualified("lo") + ": must be below " + s.qualified("hi"));
  require_min(s, "panels", 2, d);
  require_one_of(s, "rule", {"simpson", "midpoint"}, d);
  if (s.text("rule") == "simpson" && s.integer("panels") % 2 != 0)
    d.push_back(s.qualified("panels") + ": simpson needs an even panel count");
  require_min(s, "derivative_points", 1, d);
}

void run_field(const Settings& s, Output& out, RunReport& report) {
  const double k = s.num("k"), y0 = s.num("y0"), sigma = s.num("sigma"), x_ref = s.num("x_ref");
  const Quadrature quad{s.text("rule") == "simpson" ? QuadratureRule::simpson : QuadratureRule::midpoint, s.count("panels")};
  const LineDomain line{SpacetimePoint::at(0), 1, s.num("lo"), s.num("hi")};
  const auto field = AlphaField::linear(0.0, {0.0, k, 0.0, 0.0});
  const ScalarFunction density = [&](const SpacetimePoint& p) {
    const double z = (p[1] - y0) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * constants::pi));
  };
  const ScalarFunction moment = [&](const SpacetimePoint& p) { return p[1] * density(p); };

  const double closed = std::exp(k * y0 + 0.5 * k * k * sigma * sigma);
  const double integral = scaled_integral(density, field, SpacetimePoint::at(0, 0.0), line, quad);
  const double closed_moment = std::exp(-k * x_ref) * closed * (y0 + k * sigma * sigma);
  const double weighted = scaled_integral(moment, field, SpacetimePoint::at(0, x_ref), line, quad);

  const double plain = integrate(density, line, quad);
  const double zero_field = scaled_integral(density, AlphaField::constant(0.0), SpacetimePoint::at(0), line, quad);

  // D_mu exp(-alpha) on a field with every axis active.
  const auto curved = AlphaField::analytic(
      [&](const SpacetimePoint& p) { return k * p[1] + 0.2 * std::sin(p[2]) + 0.05 * p.t() - 0.1 * p[3] * p[3]; },
      [&](const SpacetimePoint& p) { return GradientVector{{0.05, k, 0.2 * std::cos(p[2]), -0.2 * p[3]}}; });
  const ScalarFunction inverse_gauge = [&](const SpacetimePoint& p) { return std::exp(-curved.alpha_at(p)); };
  double worst = 0.0;
  const std::size_t points = s.count("derivative_points");
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points);
    const auto y = SpacetimePoint::at(u, -2.0 + 4.0 * u, 3.0 * u - 1.0, 1.0 - 2.0 * u);
    for (int axis = 0; axis < 4; ++axis) worst = std::max(worst, std::fabs(covariant_derivative(inverse_gauge, curved, y, axis)));
  }

  auto conv_file = out.open("convergence.csv");
  CsvWriter conv(conv_file);
  conv.header({"panels", "scaled_integral", "abs_error"});
  for (std::size_t n = 16; n <= quad.panels; n *= 2) {
    const double v = scaled_integral(density, field, SpacetimePoint::at(0, 0.0), line, {quad.rule, n});
    conv.row({static_cast<double>(n), v, std::fabs(v - closed)});
  }

  report.checks.push_back(evaluate_check("gaussian_integral", Comparison::abs_diff, closed, integral, s.tolerance("gaussian_integral")));
  report.checks.push_back(evaluate_check("weighted_moment", Comparison::abs_diff, closed_moment, weighted, s.tolerance("weighted_moment")));
  report.checks.push_back(evaluate_check("zero_field_reduction", Comparison::rel_diff, plain, zero_field, s.tolerance("zero_field_reduction")));
  report.checks.push_back(evaluate_check("covariant_exp_identity", Comparison::at_most, 0.0, worst, s.tolerance("covariant_exp_identity")));
}

// ---------------------------------------------------------------------------
// geodesic

void validate_geodesic(const Settings& s, std::vector<std::string>& d) {
  require_one_of(s, "field", {"constant", "linear"}, d);
  require_one_of(s, "mode", {"general", "literal"}, d);
  require_positive(s, "c", d);
  require_positive(s, "step", d);
  require_positive(s, "mass", d);
  require_positive(s, "norm_tol", d);
  require_min(s, "steps", 1, d);
  require_min(s, "record_every", 1, d);
  const double v2 = s.num("vx") * s.num("vx") + s.num("vy") * s.num("vy") + s.num("vz") * s.num("vz");
  if (!(v2 < 1.0)) d.push_back(s.qualified("vx") + ": speed must be below c");
}

void run_geodesic(const Settings& s, Output& out, RunReport& report) {
  const double c = s.num("c");
  const std::array<double, 4> slope{s.num("slope_t"), s.num("slope_x"), s.num("slope_y"), s.num("slope_z")};
  const bool constant = s.text("field") == "constant";
  const auto field = constant ? AlphaField::constant(s.num("alpha0")) : AlphaField::linear(s.num("alpha0"), slope);
  const NormContraction mode = s.text("mode") == "general" ? NormContraction::general : NormContraction::literal;

  const double vx = s.num("vx") * c, vy = s.num("vy") * c, vz = s.num("vz") * c;
  const double gamma = 1.0 / std::sqrt(1.0 - (vx * vx + vy * vy + vz * vz) / (c * c));
  const GeodesicState init{SpacetimePoint::at(0), {gamma * c, gamma * vx, gamma * vy, gamma * vz}};

  IntegratorConfig cfg;
  cfg.c = c;
  cfg.mode = mode;
  cfg.step = s.num("step");
  cfg.span = cfg.step * static_cast<double>(s.count("steps"));
  cfg.record_every = 1;
  // The literal contraction does not conserve the norm, so it is reported, not enforced.
  if (mode == NormContraction::general) cfg.norm_check_tol = s.num("norm_tol");
  else cfg.norm_check_tol.reset();
  const auto traj = integrate_geodesic(field, init, cfg);

  // Reference path: the straight line when alpha is constant, else a 4x finer run.
  std::vector<std::array<double, 3>> reference;
  if (constant) {
    for (const auto& pt : traj) reference.push_back({init.u[1] * pt.param, init.u[2] * pt.param, init.u[3] * pt.param});
  } else {
    IntegratorConfig fine = cfg;
    fine.step = cfg.step / 4;
    fine.record_every = 4;
    for (const auto& pt : integrate_geodesic(field, init, fine)) reference.push_back({pt.state.p[1], pt.state.p[2], pt.state.p[3]});
  }
  const double speed = std::sqrt(init.u[1] * init.u[1] + init.u[2] * init.u[2] + init.u[3] * init.u[3]);
  const double length = std::max(speed * cfg.span, std::numeric_limits<double>::min());
  double deviation = 0.0, drift = 0.0;
  const double n0 = scaled_norm(field, init.p, init);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (int a = 1; a < 4; ++a)
      deviation = std::max(deviation, std::fabs(traj[i].state.p[a] - reference[i][static_cast<std::size_t>(a - 1)]));
    drift = std::max(drift, std::fabs(scaled_norm(field, init.p, traj[i].state) - n0) / std::fabs(n0));
  }

  // Doubling A doubles the rhs.
  std::array<double, 4> twice{};
  for (std::size_t i = 0; i < 4; ++i) twice[i] = 2.0 * slope[i];
  const auto base_field = AlphaField::linear(0.0, slope), double_field = AlphaField::linear(0.0, twice);
  double nonlinearity = 0.0;
  for (std::size_t i = 0; i < traj.size(); i += std::max<std::size_t>(1, traj.size() / 50)) {
    const auto r1 = geodesic_rhs(base_field, traj[i].state, c, mode);
    const auto r2 = geodesic_rhs(double_field, traj[i].state, c, mode);
    for (std::size_t m = 0; m < 4; ++m) {
      const double scale = std::max(std::fabs(r2[m]), std::numeric_limits<double>::min());
      nonlinearity = std::max(nonlinearity, std::fabs(r2[m] - 2.0 * r1[m]) / scale);
    }
  }

  auto file = out.open("trajectory.csv");
  CsvWriter csv(file);
  csv.header({"tau", "t", "x", "y", "z", "u0", "u1", "u2", "u3", "gamma", "E"});
  const double mass = s.num("mass");
  const std::size_t every = s.count("record_every");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i % every != 0 && i + 1 != traj.size()) continue;
    const auto& pt = traj[i];
    csv.row({pt.param, pt.state.p[0], pt.state.p[1], pt.state.p[2], pt.state.p[3], pt.state.u[0], pt.state.u[1],
             pt.state.u[2], pt.state.u[3], pt.gamma, pt.gamma * mass * c * c});
  }

  report.checks.push_back(evaluate_check("path_deviation", Comparison::at_most, 0.0, deviation / length, s.tolerance("path_deviation")));
  report.checks.push_back(evaluate_check("norm_drift", Comparison::at_most, 0.0, drift, s.tolerance("norm_drift")));
  report.checks.push_back(evaluate_check("rhs_linearity", Comparison::at_most, 0.0, nonlinearity, s.tolerance("rhs_linearity")));
}

// ---------------------------------------------------------------------------
// schrodinger

void validate_schrodinger(const Settings& s, std::vector<std::string>& d) {
  require_one_of(s, "kind", {"spectral", "finite_difference"}, d);
  require_min(s, "n", 3, d);
  require_positive(s, "length", d);
  require_positive(s, "sigma", d);
  require_positive(s, "mass", d);
  require_positive(s, "hbar", d);
  require_positive(s, "dt", d);
  require_min(s, "steps", 1, d);
  require_min(s, "snapshot_every", 1, d);
}

void run_schrodinger(const Settings& s, Output& out, RunReport& report) {
  const std::size_t n = s.count("n"), steps = s.count("steps"), every = s.count("snapshot_every");
  const double length = s.num("length"), dt = s.num("dt"), rate = s.num("rate");
  const Grid1D grid{-0.5 * length, length / static_cast<double>(n), n};
  HamiltonianSpec h;
  h.kind = s.text("kind") == "spectral" ? HamiltonianSpec::Kind::spectral_free : HamiltonianSpec::Kind::finite_difference;
  h.mass = s.num("mass");
  h.hbar = s.num("hbar");
  const auto initial = gaussian_packet(grid, s.num("center"), s.num("sigma"), s.num("k0"));
  const auto field = AlphaField::time_only([=](double t) { return rate * t; }, [=](double) { return rate; });

  auto snap_file = out.open("snapshot.csv");
  auto sum_file = out.open("summary.csv");
  CsvWriter summary(sum_file);
  summary.header({"t", "norm_sq", "position_expectation"});
  auto record = [&](const WaveFunction1D& psi, bool first) {
    write_snapshot_csv(snap_file, psi, first);
    // Expectations are defined for the normalized state; the raw norm is reported beside it.
    auto unit = psi;
    const double scale = 1.0 / std::sqrt(psi.norm_sq());
    for (auto& a : unit.amps) a *= scale;
    summary.row({psi.t, psi.norm_sq(), position_expectation(unit, field, 0.0)});
  };

  auto psi = initial;
  SchrodingerStepper damped(h, TimeScaling::constant(rate), dt, grid);
  record(psi, true);
  for (std::size_t i = 1; i <= steps; ++i) {
    damped.step(psi);
    if (i % every == 0 || i == steps) record(psi, false);
  }
  const double conserved = psi.norm_sq() * std::exp(2.0 * rate * psi.t) / initial.norm_sq();

  auto control = initial;
  SchrodingerStepper unitary(h, TimeScaling::none(), dt, grid);
  for (std::size_t i = 0; i < steps; ++i) unitary.step(control);

  report.checks.push_back(evaluate_check("norm_law", Comparison::rel_diff, 1.0, conserved, s.tolerance("norm_law")));
  report.checks.push_back(evaluate_check("unitarity", Comparison::rel_diff, 1.0, control.norm_sq() / initial.norm_sq(), s.tolerance("unitarity")));
}

// ---------------------------------------------------------------------------
// cosmology

CosmologyParams cosmology_params(const Settings& s) {
  CosmologyParams p;
  p.h0_km_s_mpc = s.num("h0");
  p.omega_m = s.num("omega_m");
  p.omega_r = s.num("omega_r");
  p.omega_v = s.num("omega_v");
  p.t_now_years = s.num("t_now_years");
  p.G = s.num("G");
  p.require_flat = s.flag("require_flat");
  return p;
}

void validate_cosmology(const Settings& s, std::vector<std::string>& d) {
  for (const auto& msg : cosmology_params(s).diagnostics()) d.push_back(s.scenario().section + ": " + msg);
  if (!(0.0 < s.num("s_rm_years") && s.num("s_rm_years") < s.num("s_de_years") && s.num("s_de_years") < s.num("t_now_years")))
    d.push_back(s.qualified("s_rm_years") + ": requires 0 < s_rm_years < s_de_years < t_now_years");
  require_min(s, "profile_points", 2, d);
  require_min(s, "redshift_points", 2, d);
  require_min(s, "ode_steps", 10, d);
  require_positive(s, "redshift_max_myr", d);
}

void run_cosmology(const Settings& s, Output& out, RunReport& report) {
  const CosmologyParams params = cosmology_params(s);
  const double year = constants::julian_year, t_now = params.t_now_seconds(), G = params.G, c = params.c;
  const EraBoundaries bounds{s.num("s_rm_years"), s.num("s_de_years")};
  const auto profile = build_alpha_profile(params, bounds);
  const auto rates = h0_convert(params.h0_km_s_mpc);
  const double h0 = rates.per_second;

  // Quoted figures, rescaled from the 70 km/s/Mpc case.
  const double ratio = params.h0_km_s_mpc / 70.0;
  report.checks.push_back(evaluate_check("h0_per_year", Comparison::rel_diff, 7.16e-11 * ratio, rates.per_year, s.tolerance("h0_per_year")));
  report.checks.push_back(evaluate_check("h0_per_second", Comparison::rel_diff, 2.3e-18 * ratio, rates.per_second, s.tolerance("h0_per_second")));

  // Era solutions against their own Friedmann equations.
  CosmologyParams pm = params, pr = params;
  pm.omega_m = 1, pm.omega_r = 0, pm.omega_v = 0;
  pr.omega_m = 0, pr.omega_r = 1, pr.omega_v = 0;
  const auto matter = AlphaProfile::pure_matter(t_now), radiation = AlphaProfile::pure_radiation(t_now);
  double r1 = 0, r2 = 0, r3_mismatch = 0;
  CosmologyParams with_lambda = pm;
  with_lambda.lambda = s.num("lambda");
  for (double f : {1e-3, 1e-2, 0.1, 0.5, 0.9}) {
    const double at = f * t_now;
    const double rho_m = density(matter, at, pm), rho_r = density(radiation, at, pr);
    const auto rm = friedmann_residuals(matter, at, rho_m, 0.0, pm);
    const auto rr = friedmann_residuals(radiation, at, rho_r, rho_r * c * c / 3.0, pr);
    r1 = std::max({r1, std::fabs(rm.r1_relative()), std::fabs(rr.r1_relative())});
    r2 = std::max({r2, std::fabs(rm.r2_relative()), std::fabs(rr.r2_relative())});
    const auto rl = friedmann_residuals(matter, at, rho_m, 0.0, with_lambda);
    if (std::memcmp(&rl.r3, &rm.r3, sizeof(double)) != 0) ++r3_mismatch;
  }
  report.checks.push_back(evaluate_check("friedmann_r1", Comparison::at_most, 0.0, r1, s.tolerance("friedmann_r1")));
  report.checks.push_back(evaluate_check("friedmann_r2", Comparison::at_most, 0.0, r2, s.tolerance("friedmann_r2")));
  report.checks.push_back(evaluate_check("r3_lambda_invariance", Comparison::at_most, 0.0, r3_mismatch, s.tolerance("r3_lambda_invariance")));

  // Direct integration of the first Friedmann equation per era.
  const std::size_t steps = s.count("ode_steps");
  const double s0 = 1e-3 * t_now;
  const auto m = integrate_friedmann(DensityModel::matter, 1.0 / (6 * constants::pi * G * t_now * t_now), s0, std::pow(1e-3, 2.0 / 3.0), t_now, steps, G);
  const auto r = integrate_friedmann(DensityModel::radiation, 3.0 / (32 * constants::pi * G * t_now * t_now), s0, std::sqrt(1e-3), t_now, steps, G);
  const double rho_v = critical_density(params);
  const auto v = integrate_friedmann(DensityModel::vacuum, rho_v, s0, 1.0, t_now, steps, G);
  report.checks.push_back(evaluate_check("matter_exponent", Comparison::abs_diff, 2.0 / 3.0, loglog_slope(m.s, m.a), s.tolerance("matter_exponent")));
  report.checks.push_back(evaluate_check("radiation_exponent", Comparison::abs_diff, 0.5, loglog_slope(r.s, r.a), s.tolerance("radiation_exponent")));
  report.checks.push_back(evaluate_check("vacuum_rate", Comparison::rel_diff, std::sqrt(8 * constants::pi * G * rho_v / 3), exponential_rate(v.s, v.a), s.tolerance("vacuum_rate")));

  // Redshift table near the present on the built profile.
  const std::size_t zpoints = s.count("redshift_points");
  const double max_dt = s.num("redshift_max_myr") * 1e6 * year;
  auto zfile = out.open("redshift.csv");
  CsvWriter ztable(zfile);
  ztable.header({"s_emit", "z_exact", "z_linear"});
  double lin_err = 0.0;
  for (std::size_t i = 1; i <= zpoints; ++i) {
    const double dt = max_dt * static_cast<double>(i) / static_cast<double>(zpoints);
    const double z = redshift(profile, t_now - dt, t_now);
    ztable.row({t_now - dt, z, h0 * dt});
    lin_err = std::max(lin_err, std::fabs(z - h0 * dt) / z);
  }
  const double probe = 1e-3 * max_dt;
  const double dzdt = (redshift(profile, t_now - 2 * probe, t_now) - redshift(profile, t_now - probe, t_now)) / probe;
  report.checks.push_back(evaluate_check("redshift_linearization", Comparison::below, 0.0, lin_err, s.tolerance("redshift_linearization")));
  report.checks.push_back(evaluate_check("redshift_rate", Comparison::rel_diff, h0, dzdt, s.tolerance("redshift_rate")));

  // Profile export, log-spaced from 1e-6 t_now.
  const std::size_t ppoints = s.count("profile_points");
  auto pfile = out.open("profile.csv");
  CsvWriter ptable(pfile);
  ptable.header({"s", "alpha", "a", "H", "rho"});
  double violations = 0, prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ppoints; ++i) {
    const double at = t_now * std::pow(10.0, -6.0 + 6.0 * static_cast<double>(i) / static_cast<double>(ppoints - 1));
    const double alpha = profile.alpha(at);
    const auto hs = hubble(profile, at);
    const double hv = hs.at_boundary ? hs.left : hs.right;
    ptable.row({at, alpha, std::exp(-alpha), hv, density(profile, at, params)});
    if (!(alpha <= prev) || !(hv > 0.0)) ++violations;
    prev = alpha;
  }
  report.checks.push_back(evaluate_check("profile_monotone", Comparison::at_most, 0.0, violations, s.tolerance("profile_monotone")));
}

// ---------------------------------------------------------------------------
// bound-check

void validate_bound(const Settings& s, std::vector<std::string>& d) {
  require_one_of(s, "field", {"hubble", "constant", "linear"}, d);
  require_positive(s, "h0", d);
  require_positive(s, "t_now_years", d);
  require_positive(s, "duration_s", d);
  require_positive(s, "extent_m", d);
  require_min(s, "samples", 2, d);
  require_min(s, "scan_points", 2, d);
}

void run_bound(const Settings& s, Output& out, RunReport& report) {
  const double t_now = s.num("t_now_years") * constants::julian_year;
  const double duration = s.num("duration_s"), extent = s.num("extent_m");
  const std::string kind = s.text("field");
  AlphaField field = AlphaField::constant(0.0);
  if (kind == "hubble") field = AlphaProfile::linear_hubble(h0_convert(s.num("h0")).per_second, t_now).to_field();
  if (kind == "linear") field = AlphaField::linear(0.0, {0.0, s.num("slope"), 0.0, 0.0});
  const Box4 region{{t_now - duration, 0.0, -extent, -extent}, {t_now, extent, extent, extent}};
  const auto x_ref = SpacetimePoint::at(t_now);
  const auto result = local_bound_check(field, region, x_ref, s.tolerance("max_deviation"), s.count("samples"));

  // Deviation profile along the active axis, for plotting.
  const int axis = kind == "linear" ? 1 : 0;
  const std::size_t scan = s.count("scan_points");
  auto file = out.open("bound_scan.csv");
  CsvWriter csv(file);
  csv.header({axis == 0 ? "t" : "x", "deviation"});
  for (std::size_t i = 0; i < scan; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(scan - 1);
    auto p = x_ref;
    p[axis] = region.lo[static_cast<std::size_t>(axis)] + u * region.extent(axis);
    csv.row({p[axis], std::fabs(field.alpha_at(p) - field.alpha_at(x_ref))});
  }

  report.checks.push_back(evaluate_check("max_deviation", Comparison::below, 0.0, result.max_deviation, s.tolerance("max_deviation")));
}

}  // namespace

const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all = {
      {"arithmetic-check",
       "arithmetic",
       "Exact rational sweep of the connection algebra and the natural valuation",
       {{"seed", P::integer, "20240611", "RNG seed"},
        {"cases", P::integer, "1000", "random cases"},
        {"max_numerator", P::integer, "100", "numerator bound"},
        {"max_denominator", P::integer, "30", "denominator bound"},
        {"natural_max_n", P::integer, "100", "largest n of N^n"},
        {"natural_max_m", P::integer, "10000", "largest tested element"},
        {"table_rows", P::integer, "20", "cases written to commutation.csv"}},
       {{"raw_preservation", 0, "failures"},
        {"composition_law", 0, "failures"},
        {"zero_fixed_point", 0, "failures"},
        {"mul_mismatch_ratio", 0, "failures"},
        {"div_mismatch_ratio", 0, "failures"},
        {"add_mismatch_ratio", 0, "failures"},
        {"structure_axioms", 0, "failures"},
        {"valuation_homomorphism", 0, "failures"}},
       validate_arithmetic,
       run_arithmetic},
      {"field-calculus",
       "field",
       "Transport-corrected integral and covariant derivative on analytic fields",
       {{"k", P::number, "0.7", "alpha = k x"},
        {"y0", P::number, "0.3", "Gaussian center"},
        {"sigma", P::number, "0.5", "Gaussian width"},
        {"x_ref", P::number, "0.2", "reference point of the moment"},
        {"lo", P::number, "-10", "integration start"},
        {"hi", P::number, "10", "integration end"},
        {"panels", P::integer, "16384", "quadrature panels"},
        {"rule", P::text, "simpson", "simpson or midpoint"},
        {"derivative_points", P::integer, "25", "points for the derivative identity"}},
       {{"gaussian_integral", 1e-8, "absolute"},
        {"weighted_moment", 1e-8, "absolute"},
        {"zero_field_reduction", 1e-15, "relative"},
        {"covariant_exp_identity", 1e-8, "max |D exp(-alpha)|"}},
       validate_field,
       run_field},
      {"geodesic",
       "geodesic",
       "RK4 geodesic in the scaled geometry",
       {{"field", P::text, "constant", "constant or linear"},
        {"alpha0", P::number, "0", "alpha offset"},
        {"slope_t", P::number, "0", "d alpha/dt, 1/s"},
        {"slope_x", P::number, "0", "d alpha/dx, 1/m"},
        {"slope_y", P::number, "0", "d alpha/dy, 1/m"},
        {"slope_z", P::number, "0", "d alpha/dz, 1/m"},
        {"vx", P::number, "0.6", "initial velocity / c"},
        {"vy", P::number, "-0.2", "initial velocity / c"},
        {"vz", P::number, "0.1", "initial velocity / c"},
        {"c", P::number, "299792458", "speed of light"},
        {"step", P::number, "1e-4", "proper-time step, s"},
        {"steps", P::integer, "10000", "number of steps"},
        {"mode", P::text, "general", "general or literal contraction"},
        {"mass", P::number, "1", "particle mass for the E column, kg"},
        {"norm_tol", P::number, "1e-6", "step-halving threshold"},
        {"record_every", P::integer, "100", "trajectory.csv stride"}},
       {{"path_deviation", 1e-9, "max deviation / path length"},
        {"norm_drift", 1e-6, "relative scaled-metric norm drift"},
        {"rhs_linearity", 1e-15, "relative"}},
       validate_geodesic,
       run_geodesic},
      {"schrodinger",
       "schrodinger",
       "Split-step evolution with a constant time-only gradient",
       {{"kind", P::text, "spectral", "spectral or finite_difference"},
        {"n", P::integer, "1024", "grid points"},
        {"length", P::number, "40", "periodic domain length"},
        {"center", P::number, "-2", "packet center"},
        {"sigma", P::number, "1", "packet width"},
        {"k0", P::number, "1.5", "packet wave number"},
        {"mass", P::number, "1", "particle mass"},
        {"hbar", P::number, "1", "reduced Planck constant"},
        {"dt", P::number, "0.01", "time step"},
        {"steps", P::integer, "1000", "number of steps"},
        {"rate", P::number, "0.05", "A = d alpha/dt"},
        {"snapshot_every", P::integer, "250", "snapshot stride"}},
       {{"norm_law", 1e-8, "relative, |psi|^2 exp(2 A t)"}, {"unitarity", 1e-10, "relative, A = 0 control"}},
       validate_schrodinger,
       run_schrodinger},
      {"cosmology",
       "cosmology",
       "Flat FLRW cosmology from a piecewise value field",
       {{"h0", P::number, "70", "km/s/Mpc"},
        {"omega_m", P::number, "0.3", "matter fraction"},
        {"omega_r", P::number, "5e-5", "radiation fraction"},
        {"omega_v", P::number, "0.69995", "vacuum fraction"},
        {"require_flat", P::boolean, "true", "require the fractions to sum to 1"},
        {"t_now_years", P::number, "13.8e9", "present age"},
        {"s_rm_years", P::number, "5e4", "radiation to matter boundary"},
        {"s_de_years", P::number, "1e10", "dark-energy onset"},
        {"G", P::number, "6.67430e-11", "gravitational constant"},
        {"lambda", P::number, "1.1e-52", "cosmological constant for the r3 sweep, 1/m^2"},
        {"ode_steps", P::integer, "2000", "RK4 steps per era"},
        {"profile_points", P::integer, "200", "rows in profile.csv"},
        {"redshift_points", P::integer, "50", "rows in redshift.csv"},
        {"redshift_max_myr", P::number, "100", "largest look-back time"}},
       {{"h0_per_year", 7e-4, "relative to 7.16e-11 h0/70"},
        {"h0_per_second", 0.022, "relative to 2.3e-18 h0/70"},
        {"friedmann_r1", 1e-9, "max relative residual"},
        {"friedmann_r2", 1e-9, "max relative residual"},
        {"r3_lambda_invariance", 0, "bitwise mismatches"},
        {"matter_exponent", 1e-3, "log-log slope"},
        {"radiation_exponent", 1e-3, "log-log slope"},
        {"vacuum_rate", 1e-6, "relative"},
        {"redshift_linearization", 0.01, "max |z - H0 dt| / z"},
        {"redshift_rate", 0.01, "relative dz/dt against H0"},
        {"profile_monotone", 0, "violations"}},
       validate_cosmology,
       run_cosmology},
      {"bound-check",
       "bound",
       "Local-region bound on the value-field deviation",
       {{"field", P::text, "hubble", "hubble, constant or linear"},
        {"h0", P::number, "70", "km/s/Mpc (hubble field)"},
        {"t_now_years", P::number, "13.8e9", "present age"},
        {"duration_s", P::number, "500", "time extent of the region"},
        {"extent_m", P::number, "1.495978707e11", "spatial half-width of the region"},
        {"slope", P::number, "1e-21", "d alpha/dx for the linear field, 1/m"},
        {"samples", P::integer, "1000", "samples per active axis"},
        {"scan_points", P::integer, "101", "rows in bound_scan.csv"}},
       {{"max_deviation", 1e-10, "epsilon"}},
       validate_bound,
       run_bound},
  };
  return all;
}

}  // namespace localmath::cli
