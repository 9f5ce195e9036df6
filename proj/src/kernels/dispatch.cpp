#include <atomic>
#include <cstdlib>
#include <string>

#include "localmath/error.hpp"
#include "localmath/kernels.hpp"

namespace localmath::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(LOCALMATH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const bool avx2 = cpu_has_avx2();
  if (const char* env = std::getenv("LOCALMATH_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && avx2) return Isa::avx2;
  }
  return avx2 ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

bool use_avx2() {
#if defined(LOCALMATH_HAVE_AVX2)
  return current().load(std::memory_order_relaxed) == Isa::avx2;
#else
  return false;
#endif
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

bool is_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() { return current().load(); }

void set_active_isa(Isa isa) {
  if (!is_supported(isa))
    fail(ErrorCode::InvalidArgument, std::string("kernel ISA not available: ") + std::string(to_string(isa)));
  current().store(isa);
}

namespace {
void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) fail(ErrorCode::InvalidArgument, std::string(what) + ": length mismatch");
}
}  // namespace

#if defined(LOCALMATH_HAVE_AVX2)
#define LOCALMATH_DISPATCH(call) (use_avx2() ? avx2::call : scalar::call)
#else
#define LOCALMATH_DISPATCH(call) (scalar::call)
#endif

double weighted_sum3(std::span<const double> w, std::span<const double> g, std::span<const double> f) {
  require_same(w.size(), g.size(), "weighted_sum3");
  require_same(w.size(), f.size(), "weighted_sum3");
  return LOCALMATH_DISPATCH(weighted_sum3(w, g, f));
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "dot");
  return LOCALMATH_DISPATCH(dot(a, b));
}

double norm_sq(cspan z) { return LOCALMATH_DISPATCH(norm_sq(z)); }

void scale(mspan z, double factor) { LOCALMATH_DISPATCH(scale(z, factor)); }

void multiply(mspan z, cspan phase) {
  require_same(z.size(), phase.size(), "multiply");
  LOCALMATH_DISPATCH(multiply(z, phase));
}

double max_abs_deviation(std::span<const double> x, double ref) {
  return LOCALMATH_DISPATCH(max_abs_deviation(x, ref));
}

#undef LOCALMATH_DISPATCH

}  // namespace localmath::kernels
