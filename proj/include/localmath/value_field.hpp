#pragma once

// The value field alpha over space-time and the transport-corrected calculus
// built on it. g(x) = exp(alpha(x)) is the local scale factor; moving a value
// from y to x multiplies it by exp(-alpha(x) + alpha(y)).
//
// Coordinates are (t, x, y, z) in seconds and meters. The temporal gradient
// component is d alpha / dt in 1/s; spatial components are in 1/m.

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace localmath {

struct SpacetimePoint {
  std::array<double, 4> coords{};

  static SpacetimePoint at(double t, double x = 0.0, double y = 0.0, double z = 0.0) {
    return {{t, x, y, z}};
  }
  double t() const noexcept { return coords[0]; }
  double operator[](int axis) const { return coords[static_cast<std::size_t>(axis)]; }
  double& operator[](int axis) { return coords[static_cast<std::size_t>(axis)]; }
  bool is_finite() const noexcept;

  SpacetimePoint shifted(int axis, double delta) const {
    SpacetimePoint p = *this;
    p[axis] += delta;
    return p;
  }

  friend bool operator==(const SpacetimePoint&, const SpacetimePoint&) = default;
};

/// A_mu = d_mu alpha. Index 0 is per second, 1..3 per meter.
struct GradientVector {
  std::array<double, 4> components{};

  double operator[](int axis) const { return components[static_cast<std::size_t>(axis)]; }
  double& operator[](int axis) { return components[static_cast<std::size_t>(axis)]; }
  friend bool operator==(const GradientVector&, const GradientVector&) = default;
};

/// Axis-aligned box in space-time; infinite bounds mean unbounded.
struct Box4 {
  std::array<double, 4> lo{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::array<double, 4> hi{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

  static Box4 unbounded() { return {}; }
  bool contains(const SpacetimePoint& p) const noexcept;
  double extent(int axis) const noexcept { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]; }
};

/// Uniform 4-D sample lattice; samples are row-major with axis 3 varying fastest.
struct GridSpec {
  std::array<std::size_t, 4> sizes{1, 1, 1, 1};
  std::array<double, 4> spacing{1.0, 1.0, 1.0, 1.0};
  std::array<double, 4> origin{0.0, 0.0, 0.0, 0.0};

  std::size_t sample_count() const noexcept { return sizes[0] * sizes[1] * sizes[2] * sizes[3]; }
  std::size_t index(const std::array<std::size_t, 4>& i) const noexcept {
    return ((i[0] * sizes[1] + i[1]) * sizes[2] + i[2]) * sizes[3] + i[3];
  }
};

enum class FieldKind { analytic, time_only, grid };

using AlphaFunction = std::function<double(const SpacetimePoint&)>;
using GradientFunction = std::function<GradientVector(const SpacetimePoint&)>;
using TimeFunction = std::function<double(double)>;

/// The value field alpha. Immutable once built; safe to share across threads.
class AlphaField {
 public:
  /// alpha = c everywhere.
  static AlphaField constant(double c);
  /// alpha(p) = offset + sum_mu slope[mu] * p[mu], with exact gradient.
  static AlphaField linear(double offset, const std::array<double, 4>& slope);
  /// General analytic field. Without a gradient function, gradients use
  /// central differences; `depends` lists the axes alpha varies along.
  static AlphaField analytic(AlphaFunction alpha, std::optional<GradientFunction> gradient = std::nullopt,
                             Box4 domain = Box4::unbounded(),
                             std::array<bool, 4> depends = {true, true, true, true});
  /// alpha depends on time only; `rate` is d alpha / dt if known.
  static AlphaField time_only(TimeFunction alpha, TimeFunction rate = {},
                              double t_lo = -std::numeric_limits<double>::infinity(),
                              double t_hi = std::numeric_limits<double>::infinity());
  /// Multilinear interpolation of lattice samples.
  static AlphaField grid(const GridSpec& spec, std::vector<double> samples);
  static AlphaField load_grid_csv(std::istream& in);
  static AlphaField load_grid_csv(const std::filesystem::path& path);

  FieldKind kind() const noexcept;
  const Box4& domain() const noexcept { return domain_; }
  bool contains(const SpacetimePoint& p) const noexcept { return domain_.contains(p); }
  bool depends_on(int axis) const noexcept { return depends_[static_cast<std::size_t>(axis)]; }
  bool has_analytic_gradient() const noexcept;

  /// Default finite-difference step along an axis at p: extent * 1e-5 for
  /// bounded axes, grid spacing for lattices, 1e-5 * max(1, |p|) otherwise.
  double fd_step(int axis, const SpacetimePoint& p) const;

  double alpha_at(const SpacetimePoint& p) const;
  GradientVector gradient_at(const SpacetimePoint& p) const;
  /// Finite-difference gradient with one Richardson extrapolation (step h, h/2).
  GradientVector gradient_richardson(const SpacetimePoint& p) const;

 private:
  struct Analytic {
    AlphaFunction alpha;
    std::optional<GradientFunction> gradient;
  };
  struct TimeOnly {
    TimeFunction alpha;
    TimeFunction rate;
  };
  struct Grid {
    GridSpec spec;
    std::vector<double> samples;
  };

  AlphaField(std::variant<Analytic, TimeOnly, Grid> impl, Box4 domain, std::array<bool, 4> depends);

  double evaluate(const SpacetimePoint& p) const;
  double grid_value(const Grid& g, const SpacetimePoint& p) const;
  double fd_partial(const SpacetimePoint& p, int axis, double h) const;

  std::variant<Analytic, TimeOnly, Grid> impl_;
  Box4 domain_;
  std::array<bool, 4> depends_;
};

// ---------------------------------------------------------------------------
// Transport of values between locations.

/// exp(-alpha(x) + alpha(y)): the factor moving a value at y to x.
double transport_factor(const AlphaField& field, const SpacetimePoint& x, const SpacetimePoint& y);

/// Value at x of a value q held at y. Products such as dot products or
/// trigonometric values are transported as single scalars.
double transport_scalar(const AlphaField& field, const SpacetimePoint& x, const SpacetimePoint& y, double q);

// ---------------------------------------------------------------------------
// Transport-corrected integration.

using ScalarFunction = std::function<double(const SpacetimePoint&)>;

enum class QuadratureRule { midpoint, simpson };

struct Quadrature {
  QuadratureRule rule = QuadratureRule::simpson;
  std::size_t panels = 1024;  // simpson requires an even count
};

/// Segment [lo, hi] along `axis` through `base`.
struct LineDomain {
  SpacetimePoint base;
  int axis = 1;
  double lo = 0.0;
  double hi = 1.0;
};

/// Spatial box at fixed time t.
struct SpatialBox {
  double t = 0.0;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
};

struct QuadratureNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureNodes quadrature_nodes(const Quadrature& quad, double lo, double hi);

/// exp(-alpha(x_ref)) * integral of exp(alpha(y)) f(y) dy.
double scaled_integral(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& x_ref,
                       const LineDomain& domain, const Quadrature& quad);
double scaled_integral(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& x_ref,
                       const SpatialBox& domain, const Quadrature& quad);

/// Plain quadrature of f; same code path as scaled_integral with alpha = 0.
double integrate(const ScalarFunction& f, const LineDomain& domain, const Quadrature& quad);

// ---------------------------------------------------------------------------
// Covariant derivative D_mu = d_mu + d * A_mu.

/// d_mu f(y) by central differences plus coupling * A_mu(y) * f(y).
/// `step` defaults to the field's fd_step along the axis.
double covariant_derivative(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& y, int axis,
                            double coupling = 1.0, std::optional<double> step = std::nullopt);

/// [exp(-alpha(y) + alpha(y + h e_mu)) f(y + h e_mu) - f(y)] / h: the
/// difference of f(y + h) transported back to y and f(y). First order in h.
double covariant_difference(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& y, int axis,
                            double h);

}  // namespace localmath
