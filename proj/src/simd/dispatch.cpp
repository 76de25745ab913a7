#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ctdnet/simd/kernels.hpp"

namespace ctdnet::simd {

namespace {

struct KernelTable {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*sq_dist_rows)(const double*, std::size_t, std::size_t, const double*, double*);
  double (*max_abs)(const double*, std::size_t);
  bool (*all_finite)(const double*, std::size_t);
};

constexpr KernelTable kScalar{Isa::Scalar,         scalar::dot,     scalar::axpy,
                              scalar::gemv,        scalar::sq_dist_rows,
                              scalar::max_abs,     scalar::all_finite};
#if defined(CTDNET_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2,         avx2::dot,     avx2::axpy,
                            avx2::gemv,        avx2::sq_dist_rows,
                            avx2::max_abs,     avx2::all_finite};
#endif
#if defined(CTDNET_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon,         neon::dot,     neon::axpy,
                            neon::gemv,        neon::sq_dist_rows,
                            neon::max_abs,     neon::all_finite};
#endif

const KernelTable* table_for(Isa isa) {
  switch (isa) {
#if defined(CTDNET_HAVE_AVX2)
    case Isa::Avx2:
      return &kAvx2;
#endif
#if defined(CTDNET_HAVE_NEON)
    case Isa::Neon:
      return &kNeon;
#endif
    default:
      return &kScalar;
  }
}

const KernelTable* initial_table() {
  if (const char* forced = std::getenv("CTDNET_SIMD")) {
    const std::string_view name{forced};
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == isa_name(isa)) return isa_supported(isa) ? table_for(isa) : &kScalar;
    }
  }
  if (isa_supported(Isa::Avx2)) return table_for(Isa::Avx2);
  if (isa_supported(Isa::Neon)) return table_for(Isa::Neon);
  return &kScalar;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

inline const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
    case Isa::Scalar:
      break;
  }
  return "scalar";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(CTDNET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(CTDNET_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return kernels().isa; }

bool set_active_isa(Isa isa) {
  if (!isa_supported(isa)) return false;
  active().store(table_for(isa), std::memory_order_relaxed);
  return true;
}

double dot(const double* a, const double* b, std::size_t n) { return kernels().dot(a, b, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  kernels().axpy(alpha, x, y, n);
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  kernels().gemv(a, rows, cols, x, y);
}

void sq_dist_rows(const double* centers, std::size_t count, std::size_t dim, const double* point,
                  double* out) {
  kernels().sq_dist_rows(centers, count, dim, point, out);
}

double max_abs(const double* x, std::size_t n) { return kernels().max_abs(x, n); }

bool all_finite(const double* x, std::size_t n) { return kernels().all_finite(x, n); }

}  // namespace ctdnet::simd
