#pragma once

// Flat FLRW cosmology parameterized by a time-only value field alpha(s):
// a(s) = exp(-alpha(s)), H(s) = -A(s) with A = d alpha / ds, and
// alpha(t_now) = 0. Internally SI: seconds, meters, kilograms; densities
// are mass densities (kg/m^3).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "localmath/constants.hpp"
#include "localmath/value_field.hpp"

namespace localmath {

struct H0Rates {
  double per_year = 0.0;
  double per_second = 0.0;
};

/// km/s/Mpc to 1/yr (Julian) and 1/s.
H0Rates h0_convert(double h0_km_s_mpc);

struct CosmologyParams {
  double h0_km_s_mpc = 70.0;
  double omega_m = 0.3;
  double omega_r = 5e-5;
  double omega_v = 0.69995;
  double G = constants::gravitational_constant;
  double c = constants::speed_of_light;
  double t_now_years = 13.8e9;
  std::optional<double> lambda;  // cosmological constant, 1/m^2
  bool require_flat = true;

  double h0_per_second() const { return h0_convert(h0_km_s_mpc).per_second; }
  double t_now_seconds() const { return t_now_years * constants::julian_year; }

  /// Empty iff valid.
  std::vector<std::string> diagnostics() const;
};

// ---------------------------------------------------------------------------
// Piecewise alpha profiles.

enum class SegmentKind { radiation, matter, linear_hubble, vacuum };

std::string to_string(SegmentKind kind);

/// One closed-form piece of alpha(s) on (s_begin, s_end].
/// Power laws: alpha = alpha_anchor - rate * ln(s / s_anchor) (rate 1/2 or 2/3).
/// Linear kinds: alpha = alpha_anchor + rate * (s_anchor - s) (rate in 1/s).
struct ProfileSegment {
  SegmentKind kind = SegmentKind::matter;
  double s_begin = 0.0;
  double s_end = 0.0;
  double rate = 0.0;
  double s_anchor = 0.0;
  double alpha_anchor = 0.0;

  bool is_power_law() const noexcept { return kind == SegmentKind::radiation || kind == SegmentKind::matter; }
  double alpha(double s) const;
  double gradient(double s) const;    // A(s)
  double gradient_rate(double s) const;  // dA/ds
};

class AlphaProfile {
 public:
  /// Segments must tile (0, t_now] in order.
  AlphaProfile(std::vector<ProfileSegment> segments, double t_now);

  /// Single-era profiles normalized to alpha(t_now) = 0.
  static AlphaProfile pure_matter(double t_now);
  static AlphaProfile pure_radiation(double t_now);
  static AlphaProfile linear_hubble(double h0_per_second, double t_now);

  double t_now() const noexcept { return t_now_; }
  const std::vector<ProfileSegment>& segments() const noexcept { return segments_; }

  /// Throws OutOfRange outside (0, t_now].
  double alpha(double s) const;
  /// Segment containing s; at an interior boundary, the earlier segment.
  const ProfileSegment& segment_at(double s) const;
  /// True when s coincides with an interior segment boundary (relative 1e-12).
  bool at_boundary(double s) const;
  /// A(s) from the segment owning s (left-sided at boundaries).
  double gradient(double s) const;
  double gradient_rate(double s) const;

  /// Time-only field over (0, t_now] with analytic rate.
  AlphaField to_field() const;

 private:
  std::vector<ProfileSegment> segments_;
  double t_now_;
};

double scale_factor(const AlphaProfile& profile, double s);

/// H(s) = -A(s). At an interior segment boundary both one-sided values are
/// returned with at_boundary set, and value() throws AtSegmentBoundary.
struct HubbleSample {
  double left = 0.0;
  double right = 0.0;
  bool at_boundary = false;

  double value() const;
};

HubbleSample hubble(const AlphaProfile& profile, double s);

/// exp(-alpha(s_recv) + alpha(s_emit)) * lambda_emit.
double wavelength_at_reception(double lambda_emit, const AlphaProfile& profile, double s_emit, double s_recv);

/// z = exp(alpha(s_emit) - alpha(s_recv)) - 1.
double redshift(const AlphaProfile& profile, double s_emit, double s_recv);

/// 3 H0^2 / (8 pi G).
double critical_density(const CosmologyParams& params);

/// (3 A(t_now)^2 / 8 pi G) (Om e^{3 d} + Or e^{4 d} + Ov), d = alpha(s) - alpha(t_now).
double density(const AlphaProfile& profile, double s, const CosmologyParams& params);

enum class DecelerationForm {
  derived,        // dA/ds = 4 pi G (rho + p / c^2)
  literal,  // dA/ds = 4 pi G (rho + p)
};

struct FriedmannResiduals {
  double r1 = 0.0;  // A^2 - 8 pi G rho / 3 [- Lambda c^2 / 3]
  double r2 = 0.0;  // (-A' + A^2) + 4 pi G / 3 (rho + 3 p / c^2) [- Lambda c^2 / 3]
  double r3 = 0.0;  // A' - 4 pi G (rho + p / c^2)
  double r1_scale = 0.0;  // magnitudes of the balanced terms, for relative residuals
  double r2_scale = 0.0;
  double r3_scale = 0.0;
  double gradient = 0.0;       // A(s)
  double gradient_rate = 0.0;  // dA/ds
  double acceleration = 0.0;   // a''/a = -A' + A^2

  double r1_relative() const { return r1_scale > 0 ? r1 / r1_scale : r1; }
  double r2_relative() const { return r2_scale > 0 ? r2 / r2_scale : r2; }
  double r3_relative() const { return r3_scale > 0 ? r3 / r3_scale : r3; }
};

/// Residuals of the Friedmann equations for rho (kg/m^3) and p (Pa) at s,
/// which must lie strictly inside a segment.
FriedmannResiduals friedmann_residuals(const AlphaProfile& profile, double s, double rho, double pressure,
                                       const CosmologyParams& params,
                                       DecelerationForm form = DecelerationForm::derived);

enum class EraKind { matter, radiation, vacuum };

struct EraSpec {
  EraKind kind = EraKind::matter;
  double s_begin = 0.0;
  double s_end = 0.0;
  std::optional<double> rho_vacuum;  // vacuum only; defaults to the critical density
};

struct EraAnchor {
  double s_ref = 0.0;
  double alpha_ref = 0.0;
};

/// matter: alpha_ref - 2/3 ln(s/s_ref); radiation: alpha_ref - 1/2 ln(s/s_ref);
/// vacuum: sqrt(8 pi G rho_V / 3) (t_now - s), independent of the anchor.
double era_alpha(const EraSpec& era, double s, const EraAnchor& anchor, const CosmologyParams& params);

struct EraBoundaries {
  double radiation_to_matter_years = 5e4;
  double dark_energy_onset_years = 1e10;
};

/// Radiation on (0, s_rm], matter on (s_rm, s_de], vacuum-dominated with rate
/// H0 on (s_de, t_now]; continuity constants fixed from alpha(t_now) = 0.
AlphaProfile build_alpha_profile(const CosmologyParams& params, const EraBoundaries& bounds = {});

// ---------------------------------------------------------------------------
// Local bound check.

struct BoundCheckResult {
  double max_deviation = 0.0;
  bool pass = false;
  std::size_t samples = 0;
};

inline constexpr double kDefaultBoundEpsilon = 1e-10;
inline constexpr std::size_t kDefaultBoundSamples = 1000;

/// max |alpha(y) - alpha(x_ref)| over uniform samples of `region`; only axes
/// the field depends on and that have nonzero extent are sampled.
BoundCheckResult local_bound_check(const AlphaField& field, const Box4& region, const SpacetimePoint& x_ref,
                                   double epsilon = kDefaultBoundEpsilon,
                                   std::size_t samples_per_axis = kDefaultBoundSamples);

BoundCheckResult local_bound_check(const AlphaProfile& profile, double s_lo, double s_hi, double s_ref,
                                   double epsilon = kDefaultBoundEpsilon,
                                   std::size_t samples = kDefaultBoundSamples);

// ---------------------------------------------------------------------------
// Direct integration of a' / a = sqrt(8 pi G rho(a) / 3).

enum class DensityModel { matter, radiation, vacuum };

struct FriedmannSolution {
  std::vector<double> s;
  std::vector<double> a;
};

/// RK4 from (s0, a0) to s1. rho(a) = rho_now * a^-3 (matter), a^-4
/// (radiation) or rho_now (vacuum). Power laws step uniformly in ln s.
FriedmannSolution integrate_friedmann(DensityModel model, double rho_now, double s0, double a0, double s1,
                                      std::size_t steps, double G = constants::gravitational_constant);

/// Least-squares slope of ln a against ln s.
double loglog_slope(std::span<const double> s, std::span<const double> a);
/// Least-squares slope of ln a against s.
double exponential_rate(std::span<const double> s, std::span<const double> a);

}  // namespace localmath
