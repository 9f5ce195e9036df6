#include <cmath>

#include "localmath/kernels.hpp"

namespace localmath::kernels::scalar {

double weighted_sum3(std::span<const double> w, std::span<const double> g, std::span<const double> f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * g[i] * f[i];
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(cspan z) {
  double acc = 0.0;
  for (const auto& v : z) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

void scale(mspan z, double factor) {
  for (auto& v : z) v = {v.real() * factor, v.imag() * factor};
}

void multiply(mspan z, cspan phase) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double a = z[i].real(), b = z[i].imag();
    const double c = phase[i].real(), d = phase[i].imag();
    z[i] = {a * c - b * d, a * d + b * c};
  }
}

double max_abs_deviation(std::span<const double> x, double ref) {
  double m = 0.0;
  for (double v : x) {
    const double d = std::fabs(v - ref);
    if (d > m || std::isnan(d)) m = d;
  }
  return m;
}

}  // namespace localmath::kernels::scalar
