// aarch64 NEON variants. Uses separate multiply and add (never vfmaq) so that
// axpy and sq_dist_rows round exactly like the scalar path.

#include "ctdnet/simd/kernels.hpp"

#include <arm_neon.h>

namespace ctdnet::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
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
    const float64x2_t p = vdupq_n_f64(point[0]);
    for (; i + 2 <= count; i += 2) {
      const float64x2_t diff = vsubq_f64(p, vld1q_f64(centers + i));
      vst1q_f64(out + i, vmulq_f64(diff, diff));
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
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) {
    const double v = x[i] < 0.0 ? -x[i] : x[i];
    if (v > r) r = v;
  }
  return r;
}

bool all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - x[i];
    if (!(d == 0.0)) return false;
  }
  return true;
}

}  // namespace ctdnet::simd::neon
