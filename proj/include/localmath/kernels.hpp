#pragma once

// Data-parallel inner loops shared by the physics modules.
//
// Each kernel has a scalar reference implementation and, where the build
// and the CPU allow, an AVX2 variant. The active variant is chosen once at
// startup (CPU detection, overridable with LOCALMATH_ISA=scalar|avx2) and
// can be switched with set_active_isa(). Reductions in the vector variants
// use a different summation order, so they agree with the reference to
// rounding, not bitwise; elementwise kernels are bitwise identical.

#include <complex>
#include <span>
#include <string_view>

namespace localmath::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool is_supported(Isa isa);
Isa active_isa();
/// Throws InvalidArgument if the ISA is not available in this build or on this CPU.
void set_active_isa(Isa isa);

using cspan = std::span<const std::complex<double>>;
using mspan = std::span<std::complex<double>>;

/// sum_i w[i] * g[i] * f[i]
double weighted_sum3(std::span<const double> w, std::span<const double> g, std::span<const double> f);
/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);
/// sum_i |z[i]|^2
double norm_sq(cspan z);
/// z[i] *= factor
void scale(mspan z, double factor);
/// z[i] *= phase[i]
void multiply(mspan z, cspan phase);
/// max_i |x[i] - ref|; 0 for empty input
double max_abs_deviation(std::span<const double> x, double ref);

namespace scalar {
double weighted_sum3(std::span<const double> w, std::span<const double> g, std::span<const double> f);
double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(cspan z);
void scale(mspan z, double factor);
void multiply(mspan z, cspan phase);
double max_abs_deviation(std::span<const double> x, double ref);
}  // namespace scalar

#if defined(LOCALMATH_HAVE_AVX2)
namespace avx2 {
double weighted_sum3(std::span<const double> w, std::span<const double> g, std::span<const double> f);
double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(cspan z);
void scale(mspan z, double factor);
void multiply(mspan z, cspan phase);
double max_abs_deviation(std::span<const double> x, double ref);
}  // namespace avx2
#endif

}  // namespace localmath::kernels
