#pragma once

// Dense double-precision kernels behind the answer network and RBF grids.
//
// Every kernel has a scalar reference implementation; AVX2 (x86-64) and NEON
// (aarch64) variants are selected once at runtime from CPU capabilities. The
// CTDNET_SIMD environment variable ("scalar", "avx2", "neon") forces a choice,
// falling back to scalar if the requested ISA is unavailable.
//
// Elementwise kernels (axpy, sq_dist_rows) are bit-identical across variants.
// Reductions (dot, gemv) reassociate the sum and agree to rounding only.

#include <cstddef>
#include <string_view>

namespace ctdnet::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// True if the running CPU (and this build) can execute `isa`.
bool isa_supported(Isa isa);

/// The ISA the dispatching kernels currently route to.
Isa active_isa();

/// Route the dispatching kernels to `isa`. Returns false (and leaves the
/// selection unchanged) if the ISA is unsupported. Intended for tests and
/// benchmarks; not meant to be toggled while kernels are running.
bool set_active_isa(Isa isa);

double dot(const double* a, const double* b, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// y = A x for row-major A (rows x cols).
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);

/// out[i] = || centers[i*dim .. i*dim+dim) - point ||^2, summed in dimension order.
void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out);

/// max_i |x[i]|; 0 for n == 0. Unspecified if any element is NaN.
double max_abs(const double* x, std::size_t n);

/// True if no element is NaN or infinite.
bool all_finite(const double* x, std::size_t n);

// Per-ISA entry points, exposed for equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out);
double max_abs(const double* x, std::size_t n);
bool all_finite(const double* x, std::size_t n);
}  // namespace scalar

#if defined(CTDNET_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out);
double max_abs(const double* x, std::size_t n);
bool all_finite(const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(CTDNET_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out);
double max_abs(const double* x, std::size_t n);
bool all_finite(const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace ctdnet::simd
