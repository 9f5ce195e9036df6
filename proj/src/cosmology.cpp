#include "localmath/cosmology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "localmath/error.hpp"
#include "localmath/kernels.hpp"

namespace localmath {

using constants::pi;

H0Rates h0_convert(double h0_km_s_mpc) {
  if (!(h0_km_s_mpc > 0.0) || !std::isfinite(h0_km_s_mpc))
    fail(ErrorCode::InvalidArgument, "H0 must be positive and finite");
  const double per_second = h0_km_s_mpc / constants::megaparsec_km;
  return {per_second * constants::julian_year, per_second};
}

std::vector<std::string> CosmologyParams::diagnostics() const {
  std::vector<std::string> out;
  if (!(h0_km_s_mpc > 0.0) || !std::isfinite(h0_km_s_mpc)) out.push_back("h0_km_s_mpc must be positive");
  if (!(omega_m >= 0.0)) out.push_back("omega_m must be >= 0");
  if (!(omega_r >= 0.0)) out.push_back("omega_r must be >= 0");
  if (!(omega_v >= 0.0)) out.push_back("omega_v must be >= 0");
  if (require_flat && !(std::fabs(omega_m + omega_r + omega_v - 1.0) <= 1e-12)) {
    std::ostringstream os;
    os.precision(15);
    os << "flatness violated: omega_m + omega_r + omega_v = " << (omega_m + omega_r + omega_v) << ", expected 1";
    out.push_back(os.str());
  }
  if (!(G > 0.0)) out.push_back("G must be positive");
  if (!(c > 0.0)) out.push_back("c must be positive");
  if (!(t_now_years > 0.0) || !std::isfinite(t_now_years)) out.push_back("t_now_years must be positive");
  if (lambda && !std::isfinite(*lambda)) out.push_back("lambda must be finite");
  return out;
}

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::radiation: return "radiation";
    case SegmentKind::matter: return "matter";
    case SegmentKind::linear_hubble: return "linear_hubble";
    case SegmentKind::vacuum: return "vacuum";
  }
  return "?";
}

double ProfileSegment::alpha(double s) const {
  if (is_power_law()) return alpha_anchor - rate * std::log(s / s_anchor);
  return alpha_anchor + rate * (s_anchor - s);
}

double ProfileSegment::gradient(double s) const { return is_power_law() ? -rate / s : -rate; }

double ProfileSegment::gradient_rate(double s) const { return is_power_law() ? rate / (s * s) : 0.0; }

AlphaProfile::AlphaProfile(std::vector<ProfileSegment> segments, double t_now)
    : segments_(std::move(segments)), t_now_(t_now) {
  if (!(t_now_ > 0.0) || !std::isfinite(t_now_)) fail(ErrorCode::InvalidBoundaries, "t_now must be positive");
  if (segments_.empty()) fail(ErrorCode::InvalidBoundaries, "profile needs at least one segment");
  if (segments_.front().s_begin != 0.0) fail(ErrorCode::InvalidBoundaries, "first segment must start at 0");
  if (segments_.back().s_end != t_now_) fail(ErrorCode::InvalidBoundaries, "last segment must end at t_now");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    if (!(seg.s_begin < seg.s_end)) fail(ErrorCode::InvalidBoundaries, "segment bounds must be increasing");
    if (i > 0 && seg.s_begin != segments_[i - 1].s_end) fail(ErrorCode::InvalidBoundaries, "segments must be contiguous");
    if (seg.is_power_law() && !(seg.s_anchor > 0.0)) fail(ErrorCode::InvalidBoundaries, "power-law anchor must be > 0");
  }
}

namespace {
AlphaProfile pure_power_law(SegmentKind kind, double exponent, double t_now) {
  ProfileSegment seg{kind, 0.0, t_now, exponent, t_now, 0.0};
  return AlphaProfile({seg}, t_now);
}
}  // namespace

AlphaProfile AlphaProfile::pure_matter(double t_now) { return pure_power_law(SegmentKind::matter, 2.0 / 3.0, t_now); }

AlphaProfile AlphaProfile::pure_radiation(double t_now) { return pure_power_law(SegmentKind::radiation, 0.5, t_now); }

AlphaProfile AlphaProfile::linear_hubble(double h0_per_second, double t_now) {
  if (!(h0_per_second > 0.0)) fail(ErrorCode::InvalidArgument, "H0 must be positive");
  ProfileSegment seg{SegmentKind::linear_hubble, 0.0, t_now, h0_per_second, t_now, 0.0};
  return AlphaProfile({seg}, t_now);
}

const ProfileSegment& AlphaProfile::segment_at(double s) const {
  if (!(s > 0.0) || !(s <= t_now_)) {
    std::ostringstream os;
    os.precision(17);
    os << "time " << s << " s outside (0, " << t_now_ << "]";
    fail(ErrorCode::OutOfRange, os.str());
  }
  for (const auto& seg : segments_)
    if (s <= seg.s_end) return seg;
  return segments_.back();
}

double AlphaProfile::alpha(double s) const { return segment_at(s).alpha(s); }

bool AlphaProfile::at_boundary(double s) const {
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double b = segments_[i].s_end;
    if (std::fabs(s - b) <= 1e-12 * b) return true;
  }
  return false;
}

double AlphaProfile::gradient(double s) const { return segment_at(s).gradient(s); }

double AlphaProfile::gradient_rate(double s) const { return segment_at(s).gradient_rate(s); }

AlphaField AlphaProfile::to_field() const {
  auto self = *this;
  auto alpha = [self](double s) {
    return s > 0.0 ? self.alpha(s) : std::numeric_limits<double>::infinity();
  };
  auto rate = [self](double s) { return self.gradient(s); };
  return AlphaField::time_only(alpha, rate, 0.0, t_now_);
}

double scale_factor(const AlphaProfile& profile, double s) { return std::exp(-profile.alpha(s)); }

double HubbleSample::value() const {
  if (at_boundary) fail(ErrorCode::AtSegmentBoundary, "Hubble rate is one-sided at a segment boundary");
  return left;
}

HubbleSample hubble(const AlphaProfile& profile, double s) {
  const auto& segs = profile.segments();
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const double b = segs[i].s_end;
    if (std::fabs(s - b) <= 1e-12 * b) return {-segs[i].gradient(b), -segs[i + 1].gradient(b), true};
  }
  const double h = -profile.gradient(s);
  return {h, h, false};
}

namespace {
void require_order(const AlphaProfile& profile, double s_emit, double s_recv) {
  if (!(s_emit > 0.0 && s_emit <= s_recv && s_recv <= profile.t_now()))
    fail(ErrorCode::OutOfRange, "requires 0 < s_emit <= s_recv <= t_now");
}
}  // namespace

double wavelength_at_reception(double lambda_emit, const AlphaProfile& profile, double s_emit, double s_recv) {
  if (!(lambda_emit > 0.0)) fail(ErrorCode::InvalidArgument, "wavelength must be positive");
  require_order(profile, s_emit, s_recv);
  return std::exp(-profile.alpha(s_recv) + profile.alpha(s_emit)) * lambda_emit;
}

double redshift(const AlphaProfile& profile, double s_emit, double s_recv) {
  require_order(profile, s_emit, s_recv);
  return std::expm1(profile.alpha(s_emit) - profile.alpha(s_recv));
}

double critical_density(const CosmologyParams& params) {
  const double h0 = params.h0_per_second();
  return 3.0 * h0 * h0 / (8.0 * pi * params.G);
}

double density(const AlphaProfile& profile, double s, const CosmologyParams& params) {
  const double t = profile.t_now();
  const double a_now = profile.gradient(t);
  const double d = profile.alpha(s) - profile.alpha(t);
  return 3.0 * a_now * a_now / (8.0 * pi * params.G) *
         (params.omega_m * std::exp(3.0 * d) + params.omega_r * std::exp(4.0 * d) + params.omega_v);
}

FriedmannResiduals friedmann_residuals(const AlphaProfile& profile, double s, double rho, double pressure,
                                       const CosmologyParams& params, DecelerationForm form) {
  if (profile.at_boundary(s))
    fail(ErrorCode::AtSegmentBoundary, "Friedmann residuals need a point inside a smooth segment");
  const double G = params.G, c = params.c;
  FriedmannResiduals r;
  r.gradient = profile.gradient(s);
  r.gradient_rate = profile.gradient_rate(s);
  const double a2 = r.gradient * r.gradient;
  const double lambda_term = params.lambda ? *params.lambda * c * c / 3.0 : 0.0;
  r.acceleration = -r.gradient_rate + a2;

  const double source1 = 8.0 * pi * G * rho / 3.0;
  r.r1 = a2 - source1 - lambda_term;
  r.r1_scale = a2 + std::fabs(source1) + std::fabs(lambda_term);

  const double source2 = 4.0 * pi * G / 3.0 * (rho + 3.0 * pressure / (c * c));
  r.r2 = r.acceleration + source2 - lambda_term;
  r.r2_scale = std::fabs(r.gradient_rate) + a2 + std::fabs(source2) + std::fabs(lambda_term);

  // No Lambda here: it cancels when the first two equations are combined.
  const double p_term = form == DecelerationForm::derived ? pressure / (c * c) : pressure;
  r.r3 = r.gradient_rate - 4.0 * pi * G * (rho + p_term);
  r.r3_scale = std::fabs(r.gradient_rate) + 4.0 * pi * G * (std::fabs(rho) + std::fabs(p_term));
  return r;
}

double era_alpha(const EraSpec& era, double s, const EraAnchor& anchor, const CosmologyParams& params) {
  if (!(era.s_begin < era.s_end)) fail(ErrorCode::InvalidBoundaries, "era bounds must be increasing");
  if (!(s > 0.0) || s < era.s_begin || s > era.s_end) fail(ErrorCode::OutOfRange, "time outside the era");
  switch (era.kind) {
    case EraKind::matter:
    case EraKind::radiation: {
      if (!(anchor.s_ref > 0.0)) fail(ErrorCode::InvalidArgument, "anchor time must be positive");
      const double exponent = era.kind == EraKind::matter ? 2.0 / 3.0 : 0.5;
      return anchor.alpha_ref - exponent * std::log(s / anchor.s_ref);
    }
    case EraKind::vacuum: {
      const double rho_v = era.rho_vacuum.value_or(critical_density(params));
      if (!(rho_v >= 0.0)) fail(ErrorCode::InvalidArgument, "vacuum density must be >= 0");
      return std::sqrt(8.0 * pi * params.G * rho_v / 3.0) * (params.t_now_seconds() - s);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown era kind");
}

AlphaProfile build_alpha_profile(const CosmologyParams& params, const EraBoundaries& bounds) {
  if (auto diag = params.diagnostics(); !diag.empty()) fail(ErrorCode::InvalidArgument, diag.front());
  const double t_now = params.t_now_seconds();
  const double s_rm = bounds.radiation_to_matter_years * constants::julian_year;
  const double s_de = bounds.dark_energy_onset_years * constants::julian_year;
  if (!(0.0 < s_rm && s_rm < s_de && s_de < t_now))
    fail(ErrorCode::InvalidBoundaries, "requires 0 < radiation/matter boundary < dark-energy onset < t_now");
  const double h0 = params.h0_per_second();

  const ProfileSegment vacuum{SegmentKind::vacuum, s_de, t_now, h0, t_now, 0.0};
  const double alpha_de = vacuum.alpha(s_de);
  const ProfileSegment matter{SegmentKind::matter, s_rm, s_de, 2.0 / 3.0, s_de, alpha_de};
  const double alpha_rm = matter.alpha(s_rm);
  const ProfileSegment radiation{SegmentKind::radiation, 0.0, s_rm, 0.5, s_rm, alpha_rm};
  return AlphaProfile({radiation, matter, vacuum}, t_now);
}

BoundCheckResult local_bound_check(const AlphaField& field, const Box4& region, const SpacetimePoint& x_ref,
                                   double epsilon, std::size_t samples_per_axis) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "bound epsilon must be positive");
  if (samples_per_axis < 2) fail(ErrorCode::InvalidArgument, "need at least 2 samples per axis");
  const double alpha_ref = field.alpha_at(x_ref);

  std::vector<int> active;
  SpacetimePoint base;
  for (int mu = 0; mu < 4; ++mu) {
    const auto i = static_cast<std::size_t>(mu);
    const bool varies = field.depends_on(mu) && region.hi[i] > region.lo[i];
    if (varies) {
      if (!std::isfinite(region.lo[i]) || !std::isfinite(region.hi[i]))
        fail(ErrorCode::InvalidArgument, "region must be bounded along axes the field depends on");
      active.push_back(mu);
    }
    base[mu] = field.depends_on(mu) ? region.lo[i] : x_ref[mu];
  }

  auto coordinate = [&](int mu, std::size_t k) {
    const auto i = static_cast<std::size_t>(mu);
    if (k + 1 == samples_per_axis) return region.hi[i];
    return region.lo[i] + (region.hi[i] - region.lo[i]) * static_cast<double>(k) / static_cast<double>(samples_per_axis - 1);
  };

  BoundCheckResult out;
  if (active.empty()) {
    out.max_deviation = std::fabs(field.alpha_at(base) - alpha_ref);
    out.samples = 1;
  } else {
    const int inner = active.back();
    const std::size_t outer_axes = active.size() - 1;
    std::size_t outer_count = 1;
    for (std::size_t k = 0; k < outer_axes; ++k) {
      if (outer_count > (std::size_t{1} << 31) / samples_per_axis)
        fail(ErrorCode::InvalidArgument, "bound-check sample count too large");
      outer_count *= samples_per_axis;
    }
    std::vector<double> row(samples_per_axis);
    for (std::size_t o = 0; o < outer_count; ++o) {
      SpacetimePoint p = base;
      std::size_t rem = o;
      for (std::size_t k = 0; k < outer_axes; ++k) {
        p[active[k]] = coordinate(active[k], rem % samples_per_axis);
        rem /= samples_per_axis;
      }
      for (std::size_t j = 0; j < samples_per_axis; ++j) {
        p[inner] = coordinate(inner, j);
        row[j] = field.alpha_at(p);
      }
      out.max_deviation = std::max(out.max_deviation, kernels::max_abs_deviation(row, alpha_ref));
    }
    out.samples = outer_count * samples_per_axis;
  }
  out.pass = out.max_deviation < epsilon;
  return out;
}

BoundCheckResult local_bound_check(const AlphaProfile& profile, double s_lo, double s_hi, double s_ref,
                                   double epsilon, std::size_t samples) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "bound epsilon must be positive");
  if (samples < 2) fail(ErrorCode::InvalidArgument, "need at least 2 samples");
  if (!(s_lo <= s_hi)) fail(ErrorCode::InvalidArgument, "requires s_lo <= s_hi");
  const double alpha_ref = profile.alpha(s_ref);
  std::vector<double> row(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double s = j + 1 == samples ? s_hi
                                      : s_lo + (s_hi - s_lo) * static_cast<double>(j) / static_cast<double>(samples - 1);
    row[j] = profile.alpha(s);
  }
  BoundCheckResult out;
  out.max_deviation = kernels::max_abs_deviation(row, alpha_ref);
  out.samples = samples;
  out.pass = out.max_deviation < epsilon;
  return out;
}

FriedmannSolution integrate_friedmann(DensityModel model, double rho_now, double s0, double a0, double s1,
                                      std::size_t steps, double G) {
  if (!(0.0 < s0 && s0 < s1)) fail(ErrorCode::InvalidArgument, "requires 0 < s0 < s1");
  if (!(a0 > 0.0)) fail(ErrorCode::InvalidArgument, "initial scale factor must be positive");
  if (!(rho_now >= 0.0)) fail(ErrorCode::InvalidArgument, "density must be >= 0");
  if (steps == 0) fail(ErrorCode::InvalidArgument, "need at least one step");
  const double k = std::sqrt(8.0 * pi * G * rho_now / 3.0);
  const bool log_steps = model != DensityModel::vacuum;

  // da/dx with x = ln s for power laws, x = s for vacuum.
  auto rhs = [&](double x, double a) {
    double h = k;
    if (model == DensityModel::matter) h = k * std::pow(a, -1.5);
    else if (model == DensityModel::radiation) h = k / (a * a);
    const double ds_dx = log_steps ? std::exp(x) : 1.0;
    return a * h * ds_dx;
  };

  const double x0 = log_steps ? std::log(s0) : s0;
  const double x1 = log_steps ? std::log(s1) : s1;
  const double dx = (x1 - x0) / static_cast<double>(steps);
  FriedmannSolution out;
  out.s.reserve(steps + 1);
  out.a.reserve(steps + 1);
  double a = a0;
  out.s.push_back(s0);
  out.a.push_back(a0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double x = x0 + static_cast<double>(i) * dx;
    const double k1 = rhs(x, a);
    const double k2 = rhs(x + 0.5 * dx, a + 0.5 * dx * k1);
    const double k3 = rhs(x + 0.5 * dx, a + 0.5 * dx * k2);
    const double k4 = rhs(x + dx, a + dx * k3);
    a += dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double xn = i + 1 == steps ? x1 : x0 + static_cast<double>(i + 1) * dx;
    out.s.push_back(log_steps ? std::exp(xn) : xn);
    out.a.push_back(a);
  }
  out.s.back() = s1;
  return out;
}

namespace {
double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorCode::InvalidArgument, "fit needs at least two matching samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::vector<double> logs(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
  return out;
}
}  // namespace

double loglog_slope(std::span<const double> s, std::span<const double> a) {
  const auto ls = logs(s);
  const auto la = logs(a);
  return least_squares_slope(ls, la);
}

double exponential_rate(std::span<const double> s, std::span<const double> a) {
  const auto la = logs(a);
  return least_squares_slope(s, la);
}

}  // namespace localmath
