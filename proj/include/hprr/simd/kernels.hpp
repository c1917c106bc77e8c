#pragma once

// Dense double-precision kernels behind the reward batch scorer, the
// preference estimators and the simplex pivot. Each kernel has a scalar
// reference; vector variants are picked once at startup from CPU features.
// HPRR_SIMD=scalar|avx2|neon|auto in the environment overrides the choice.

#include <cstddef>
#include <span>
#include <string_view>

namespace hprr::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Function table for one instruction set. Matrices are row-major.
struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A is rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, y has cols entries
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // out = A^T diag(w) A, out is cols x cols; w == nullptr means identity
  void (*weighted_gram)(const double* a, std::size_t rows, std::size_t cols, const double* w,
                        double* out);
};

const KernelTable& scalar_kernels();
/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Table selected for this process.
const KernelTable& active();

// Span front-ends over the active table.
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> x,
          std::span<double> y);
void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
void weighted_gram(std::span<const double> a, std::size_t rows, std::size_t cols,
                   std::span<const double> w, std::span<double> out);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(HPRR_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace hprr::simd
