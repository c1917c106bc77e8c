#include "hprr/simd/kernels.hpp"

namespace hprr::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

void gemv_t_scalar(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(x[r], a + r * cols, y, cols);
}

void weighted_gram_scalar(const double* a, std::size_t rows, std::size_t cols, const double* w,
                          double* out) {
  for (std::size_t i = 0; i < cols * cols; ++i) out[i] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    const double wr = w ? w[r] : 1.0;
    for (std::size_t j = 0; j < cols; ++j) axpy_scalar(wr * row[j], row, out + j * cols, cols);
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar,  dot_scalar,    axpy_scalar,
                               gemv_scalar,  gemv_t_scalar, weighted_gram_scalar};
}  // namespace detail

}  // namespace hprr::simd
