#include "ctdnet/simd/kernels.hpp"

#include <cmath>

namespace ctdnet::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out) {
  for (std::size_t i = 0; i < count; ++i) {
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
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

bool all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

}  // namespace ctdnet::simd::scalar
