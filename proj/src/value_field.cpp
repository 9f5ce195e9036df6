#include "localmath/value_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "localmath/error.hpp"
#include "localmath/kernels.hpp"

namespace localmath {

namespace {

constexpr double kRelativeStep = 1e-5;

std::string describe(const SpacetimePoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
  return os.str();
}

void require_axis(int axis) {
  if (axis < 0 || axis > 3) fail(ErrorCode::InvalidArgument, "axis index must be in 0..3");
}

}  // namespace

bool SpacetimePoint::is_finite() const noexcept {
  return std::all_of(coords.begin(), coords.end(), [](double v) { return std::isfinite(v); });
}

bool Box4::contains(const SpacetimePoint& p) const noexcept {
  for (int mu = 0; mu < 4; ++mu) {
    const auto i = static_cast<std::size_t>(mu);
    if (!(p[mu] >= lo[i] && p[mu] <= hi[i])) return false;
  }
  return true;
}

AlphaField::AlphaField(std::variant<Analytic, TimeOnly, Grid> impl, Box4 domain, std::array<bool, 4> depends)
    : impl_(std::move(impl)), domain_(domain), depends_(depends) {}

AlphaField AlphaField::constant(double c) {
  if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "constant field must be finite");
  return AlphaField(Analytic{[c](const SpacetimePoint&) { return c; },
                             GradientFunction([](const SpacetimePoint&) { return GradientVector{}; })},
                    Box4::unbounded(), {false, false, false, false});
}

AlphaField AlphaField::linear(double offset, const std::array<double, 4>& slope) {
  auto alpha = [offset, slope](const SpacetimePoint& p) {
    double v = offset;
    for (int mu = 0; mu < 4; ++mu) v += slope[static_cast<std::size_t>(mu)] * p[mu];
    return v;
  };
  auto gradient = [slope](const SpacetimePoint&) { return GradientVector{slope}; };
  std::array<bool, 4> depends{};
  for (std::size_t i = 0; i < 4; ++i) depends[i] = slope[i] != 0.0;
  return AlphaField(Analytic{alpha, GradientFunction(gradient)}, Box4::unbounded(), depends);
}

AlphaField AlphaField::analytic(AlphaFunction alpha, std::optional<GradientFunction> gradient, Box4 domain,
                                std::array<bool, 4> depends) {
  if (!alpha) fail(ErrorCode::InvalidArgument, "analytic field requires an alpha function");
  return AlphaField(Analytic{std::move(alpha), std::move(gradient)}, domain, depends);
}

AlphaField AlphaField::time_only(TimeFunction alpha, TimeFunction rate, double t_lo, double t_hi) {
  if (!alpha) fail(ErrorCode::InvalidArgument, "time-only field requires an alpha function");
  if (!(t_lo < t_hi)) fail(ErrorCode::InvalidArgument, "time-only field requires t_lo < t_hi");
  Box4 domain;
  domain.lo[0] = t_lo;
  domain.hi[0] = t_hi;
  return AlphaField(TimeOnly{std::move(alpha), std::move(rate)}, domain, {true, false, false, false});
}

AlphaField AlphaField::grid(const GridSpec& spec, std::vector<double> samples) {
  Box4 domain;
  std::array<bool, 4> depends{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (spec.sizes[i] == 0) fail(ErrorCode::InvalidArgument, "grid axis size must be >= 1");
    if (spec.sizes[i] > 1) {
      if (!(spec.spacing[i] > 0.0) || !std::isfinite(spec.spacing[i]))
        fail(ErrorCode::InvalidArgument, "grid spacing must be positive and finite");
      domain.lo[i] = spec.origin[i];
      domain.hi[i] = spec.origin[i] + static_cast<double>(spec.sizes[i] - 1) * spec.spacing[i];
      depends[i] = true;
    }
  }
  if (samples.size() != spec.sample_count())
    fail(ErrorCode::InvalidArgument, "grid expects " + std::to_string(spec.sample_count()) + " samples, got " +
                                         std::to_string(samples.size()));
  if (!std::all_of(samples.begin(), samples.end(), [](double v) { return std::isfinite(v); }))
    fail(ErrorCode::InvalidArgument, "grid samples must be finite");
  return AlphaField(Grid{spec, std::move(samples)}, domain, depends);
}

AlphaField AlphaField::load_grid_csv(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) fail(ErrorCode::IoError, "grid csv: missing header");
  {
    std::string compact;
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
    if (compact != "axis_sizes,h_per_axis,origin")
      fail(ErrorCode::IoError, "grid csv: header must be 'axis_sizes,h_per_axis,origin'");
  }
  if (!next_line(line)) fail(ErrorCode::IoError, "grid csv: missing layout row");
  GridSpec spec;
  {
    std::array<std::string, 3> fields;
    std::istringstream row(line);
    for (auto& f : fields)
      if (!std::getline(row, f, ',')) fail(ErrorCode::IoError, "grid csv: layout row needs three fields");
    auto read4 = [](const std::string& text, auto& out, const char* what) {
      std::istringstream is(text);
      for (auto& v : out)
        if (!(is >> v)) fail(ErrorCode::IoError, std::string("grid csv: bad ") + what);
    };
    read4(fields[0], spec.sizes, "axis_sizes");
    read4(fields[1], spec.spacing, "h_per_axis");
    read4(fields[2], spec.origin, "origin");
  }
  std::vector<double> samples;
  samples.reserve(spec.sample_count());
  while (next_line(line)) {
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream is(line);
    std::string token;
    while (is >> token) {
      try {
        std::size_t used = 0;
        samples.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        fail(ErrorCode::IoError, "grid csv: bad sample '" + token + "'");
      }
    }
  }
  return grid(spec, std::move(samples));
}

AlphaField AlphaField::load_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open grid file " + path.string());
  return load_grid_csv(in);
}

FieldKind AlphaField::kind() const noexcept {
  switch (impl_.index()) {
    case 0: return FieldKind::analytic;
    case 1: return FieldKind::time_only;
    default: return FieldKind::grid;
  }
}

bool AlphaField::has_analytic_gradient() const noexcept {
  if (const auto* a = std::get_if<Analytic>(&impl_)) return a->gradient.has_value();
  if (const auto* t = std::get_if<TimeOnly>(&impl_)) return static_cast<bool>(t->rate);
  return false;
}

double AlphaField::fd_step(int axis, const SpacetimePoint& p) const {
  require_axis(axis);
  if (const auto* g = std::get_if<Grid>(&impl_)) return g->spec.spacing[static_cast<std::size_t>(axis)];
  const double extent = domain_.extent(axis);
  if (std::isfinite(extent) && extent > 0.0) return extent * kRelativeStep;
  return kRelativeStep * std::max(1.0, std::fabs(p[axis]));
}

double AlphaField::grid_value(const Grid& g, const SpacetimePoint& p) const {
  std::array<std::size_t, 4> base{};
  std::array<double, 4> frac{};
  std::array<bool, 4> active{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (g.spec.sizes[i] < 2) continue;
    const double u = (p.coords[i] - g.spec.origin[i]) / g.spec.spacing[i];
    const auto last = static_cast<double>(g.spec.sizes[i] - 2);
    const double cell = std::clamp(std::floor(u), 0.0, last);
    base[i] = static_cast<std::size_t>(cell);
    frac[i] = u - cell;
    active[i] = true;
  }
  double value = 0.0;
  for (unsigned corner = 0; corner < 16; ++corner) {
    double weight = 1.0;
    std::array<std::size_t, 4> idx = base;
    bool skip = false;
    for (std::size_t i = 0; i < 4; ++i) {
      const bool upper = (corner >> i) & 1u;
      if (!active[i]) {
        if (upper) skip = true;
        continue;
      }
      weight *= upper ? frac[i] : 1.0 - frac[i];
      idx[i] += upper ? 1 : 0;
    }
    if (skip || weight == 0.0) continue;
    value += weight * g.samples[g.spec.index(idx)];
  }
  return value;
}

double AlphaField::evaluate(const SpacetimePoint& p) const {
  return std::visit(
      [&](const auto& impl) -> double {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, Analytic>) return impl.alpha(p);
        else if constexpr (std::is_same_v<T, TimeOnly>) return impl.alpha(p.t());
        else return grid_value(impl, p);
      },
      impl_);
}

double AlphaField::alpha_at(const SpacetimePoint& p) const {
  if (!p.is_finite() || !contains(p)) fail(ErrorCode::OutOfDomain, "alpha_at " + describe(p));
  const double v = evaluate(p);
  if (!std::isfinite(v)) fail(ErrorCode::OutOfDomain, "alpha is not finite at " + describe(p));
  return v;
}

double AlphaField::fd_partial(const SpacetimePoint& p, int axis, double h) const {
  const auto i = static_cast<std::size_t>(axis);
  const double x = p[axis];
  const double lo = domain_.lo[i], hi = domain_.hi[i];
  auto f = [&](double offset) { return evaluate(p.shifted(axis, offset)); };
  if (x - h >= lo && x + h <= hi) return (f(h) - f(-h)) / (2.0 * h);
  if (x + 2.0 * h <= hi) return (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
  if (x - 2.0 * h >= lo) return (3.0 * f(0.0) - 4.0 * f(-h) + f(-2.0 * h)) / (2.0 * h);
  // Two-sample lattices are narrower than any three-point stencil: use the chord.
  if (std::isfinite(lo) && std::isfinite(hi) && hi > lo) return (f(hi - x) - f(lo - x)) / (hi - lo);
  fail(ErrorCode::OutOfDomain, "domain too narrow for a finite-difference stencil at " + describe(p));
}

GradientVector AlphaField::gradient_at(const SpacetimePoint& p) const {
  if (!p.is_finite() || !contains(p)) fail(ErrorCode::OutOfDomain, "gradient_at " + describe(p));
  if (const auto* a = std::get_if<Analytic>(&impl_); a && a->gradient) return (*a->gradient)(p);
  if (const auto* t = std::get_if<TimeOnly>(&impl_); t && t->rate) return GradientVector{{t->rate(p.t()), 0, 0, 0}};
  GradientVector out;
  for (int mu = 0; mu < 4; ++mu)
    if (depends_on(mu)) out[mu] = fd_partial(p, mu, fd_step(mu, p));
  return out;
}

GradientVector AlphaField::gradient_richardson(const SpacetimePoint& p) const {
  if (!p.is_finite() || !contains(p)) fail(ErrorCode::OutOfDomain, "gradient_richardson " + describe(p));
  GradientVector out;
  for (int mu = 0; mu < 4; ++mu) {
    if (!depends_on(mu)) continue;
    const double h = fd_step(mu, p);
    out[mu] = (4.0 * fd_partial(p, mu, 0.5 * h) - fd_partial(p, mu, h)) / 3.0;
  }
  return out;
}

double transport_factor(const AlphaField& field, const SpacetimePoint& x, const SpacetimePoint& y) {
  if (x == y) return 1.0;
  return std::exp(-field.alpha_at(x) + field.alpha_at(y));
}

double transport_scalar(const AlphaField& field, const SpacetimePoint& x, const SpacetimePoint& y, double q) {
  return q * transport_factor(field, x, y);
}

QuadratureNodes quadrature_nodes(const Quadrature& quad, double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    fail(ErrorCode::InvalidArgument, "quadrature interval must be finite with lo < hi");
  const std::size_t n = quad.panels;
  if (n < 2) fail(ErrorCode::InvalidArgument, "quadrature needs at least 2 panels");
  const double h = (hi - lo) / static_cast<double>(n);
  QuadratureNodes out;
  if (quad.rule == QuadratureRule::midpoint) {
    out.nodes.resize(n);
    out.weights.assign(n, h);
    for (std::size_t i = 0; i < n; ++i) out.nodes[i] = lo + (static_cast<double>(i) + 0.5) * h;
    return out;
  }
  if (n % 2 != 0) fail(ErrorCode::InvalidArgument, "simpson quadrature needs an even panel count");
  out.nodes.resize(n + 1);
  out.weights.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    out.nodes[i] = (i == n) ? hi : lo + static_cast<double>(i) * h;
    out.weights[i] = (i == 0 || i == n) ? h / 3.0 : (i % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  }
  return out;
}

namespace {

// Both the plain and the scaled integral go through here; a null field means alpha = 0.
double line_sum(const ScalarFunction& f, const AlphaField* field, const LineDomain& domain, const Quadrature& quad) {
  require_axis(domain.axis);
  const QuadratureNodes q = quadrature_nodes(quad, domain.lo, domain.hi);
  std::vector<double> g(q.nodes.size(), 1.0);
  std::vector<double> values(q.nodes.size());
  SpacetimePoint p = domain.base;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    p[domain.axis] = q.nodes[i];
    if (field) g[i] = std::exp(field->alpha_at(p));
    values[i] = f(p);
    if (!std::isfinite(values[i]) || !std::isfinite(g[i]))
      fail(ErrorCode::NonFiniteIntegrand, "integrand not finite at node " + std::to_string(i));
  }
  return kernels::weighted_sum3(q.weights, g, values);
}

}  // namespace

double scaled_integral(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& x_ref,
                       const LineDomain& domain, const Quadrature& quad) {
  return std::exp(-field.alpha_at(x_ref)) * line_sum(f, &field, domain, quad);
}

double integrate(const ScalarFunction& f, const LineDomain& domain, const Quadrature& quad) {
  return line_sum(f, nullptr, domain, quad);
}

double scaled_integral(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& x_ref,
                       const SpatialBox& domain, const Quadrature& quad) {
  std::array<QuadratureNodes, 3> q{quadrature_nodes(quad, domain.lo[0], domain.hi[0]),
                                   quadrature_nodes(quad, domain.lo[1], domain.hi[1]),
                                   quadrature_nodes(quad, domain.lo[2], domain.hi[2])};
  const std::size_t nz = q[2].nodes.size();
  std::vector<double> g(nz), values(nz);
  double total = 0.0;
  for (std::size_t i = 0; i < q[0].nodes.size(); ++i) {
    for (std::size_t j = 0; j < q[1].nodes.size(); ++j) {
      for (std::size_t k = 0; k < nz; ++k) {
        const auto p = SpacetimePoint::at(domain.t, q[0].nodes[i], q[1].nodes[j], q[2].nodes[k]);
        g[k] = std::exp(field.alpha_at(p));
        values[k] = f(p);
        if (!std::isfinite(values[k]) || !std::isfinite(g[k]))
          fail(ErrorCode::NonFiniteIntegrand, "integrand not finite at " + describe(p));
      }
      total += q[0].weights[i] * q[1].weights[j] * kernels::weighted_sum3(q[2].weights, g, values);
    }
  }
  return std::exp(-field.alpha_at(x_ref)) * total;
}

double covariant_derivative(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& y, int axis,
                            double coupling, std::optional<double> step) {
  require_axis(axis);
  const GradientVector a = field.gradient_at(y);
  const double h = step.value_or(field.fd_step(axis, y));
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "derivative step must be positive");
  const double partial = (f(y.shifted(axis, h)) - f(y.shifted(axis, -h))) / (2.0 * h);
  return partial + coupling * a[axis] * f(y);
}

double covariant_difference(const ScalarFunction& f, const AlphaField& field, const SpacetimePoint& y, int axis,
                            double h) {
  require_axis(axis);
  if (h == 0.0 || !std::isfinite(h)) fail(ErrorCode::InvalidArgument, "difference step must be nonzero");
  const SpacetimePoint ahead = y.shifted(axis, h);
  return (transport_factor(field, y, ahead) * f(ahead) - f(y)) / h;
}

}  // namespace localmath
