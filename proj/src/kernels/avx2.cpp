#include <immintrin.h>

#include <cmath>
#include <limits>

#include "localmath/kernels.hpp"

namespace localmath::kernels::avx2 {

namespace {
double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

double weighted_sum3(std::span<const double> w, std::span<const double> g, std::span<const double> f) {
  const std::size_t n = w.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&g[i]));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(&w[i + 4]), _mm256_loadu_pd(&g[i + 4]));
    acc0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(&f[i]), acc0);
    acc1 = _mm256_fmadd_pd(p1, _mm256_loadu_pd(&f[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&g[i]));
    acc0 = _mm256_fmadd_pd(p, _mm256_loadu_pd(&f[i]), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * g[i] * f[i];
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i + 4]), _mm256_loadu_pd(&b[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(cspan z) {
  const double* p = reinterpret_cast<const double*>(z.data());
  const std::size_t n = 2 * z.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(p + i);
    const __m256d v1 = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(p + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += p[i] * p[i];
  return acc;
}

void scale(mspan z, double factor) {
  double* p = reinterpret_cast<double*>(z.data());
  const std::size_t n = 2 * z.size();
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), f));
  for (; i < n; ++i) p[i] *= factor;
}

// Separate mul and addsub (no fused ops) so results match the scalar kernel bitwise.
void multiply(mspan z, cspan phase) {
  double* p = reinterpret_cast<double*>(z.data());
  const double* q = reinterpret_cast<const double*>(phase.data());
  const std::size_t n = 2 * z.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(p + i);
    const __m256d w = _mm256_loadu_pd(q + i);
    const __m256d w_re = _mm256_movedup_pd(w);
    const __m256d w_im = _mm256_permute_pd(w, 0xF);
    const __m256d t1 = _mm256_mul_pd(v, w_re);
    const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(v, 0x5), w_im);
    _mm256_storeu_pd(p + i, _mm256_addsub_pd(t1, t2));
  }
  for (std::size_t k = i / 2; k < z.size(); ++k) {
    const double a = z[k].real(), b = z[k].imag();
    const double c = phase[k].real(), d = phase[k].imag();
    z[k] = {a * c - b * d, a * d + b * c};
  }
}

double max_abs_deviation(std::span<const double> x, double ref) {
  const std::size_t n = x.size();
  const __m256d r = _mm256_set1_pd(ref);
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan_mask = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(&x[i]), r));
    nan_mask = _mm256_or_pd(nan_mask, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, d);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double out = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  bool saw_nan = _mm256_movemask_pd(nan_mask) != 0;
  for (; i < n; ++i) {
    const double d = std::fabs(x[i] - ref);
    if (std::isnan(d)) saw_nan = true;
    else if (d > out) out = d;
  }
  return saw_nan ? std::numeric_limits<double>::quiet_NaN() : out;
}

}  // namespace localmath::kernels::avx2
