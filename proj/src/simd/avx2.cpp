// Compiled with -mavx2 (no FMA: axpy must round exactly like the scalar path).
// Keep this translation unit free of standard-library templates so no AVX2
// instantiation can leak into code shared with other translation units.

#include "ctdnet/simd/kernels.hpp"

#include <immintrin.h>

namespace ctdnet::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out) {
  std::size_t i = 0;
  if (dim == 1) {
    const __m256d p = _mm256_set1_pd(point[0]);
    for (; i + 4 <= count; i += 4) {
      const __m256d diff = _mm256_sub_pd(p, _mm256_loadu_pd(centers + i));
      _mm256_storeu_pd(out + i, _mm256_mul_pd(diff, diff));
    }
  } else {
    const __m256i stride = _mm256_set_epi64x(static_cast<long long>(3 * dim),
                                             static_cast<long long>(2 * dim),
                                             static_cast<long long>(dim), 0);
    for (; i + 4 <= count; i += 4) {
      __m256d d2 = _mm256_setzero_pd();
      for (std::size_t k = 0; k < dim; ++k) {
        const __m256d c = _mm256_i64gather_pd(centers + i * dim + k, stride, 8);
        const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(point[k]), c);
        d2 = _mm256_add_pd(d2, _mm256_mul_pd(diff, diff));
      }
      _mm256_storeu_pd(out + i, d2);
    }
  }
  for (; i < count; ++i) {
    const double* c = centers + i * dim;
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = point[k] - c[k];
      d2 += diff * diff;
    }
    out[i] = d2;
  }
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  }
  double r = hmax(m);
  for (; i < n; ++i) {
    const double v = x[i] < 0.0 ? -x[i] : x[i];
    if (v > r) r = v;
  }
  return r;
}

bool all_finite(const double* x, std::size_t n) {
  // x - x is 0 for finite x and NaN for inf/NaN.
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d eq = _mm256_cmp_pd(_mm256_sub_pd(v, v), zero, _CMP_EQ_OQ);
    if (_mm256_movemask_pd(eq) != 0xF) return false;
  }
  for (; i < n; ++i) {
    const double d = x[i] - x[i];
    if (!(d == 0.0)) return false;
  }
  return true;
}

}  // namespace ctdnet::simd::avx2
