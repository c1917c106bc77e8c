#include <cassert>
#include <cstdlib>
#include <string>

#include "hprr/simd/kernels.hpp"

namespace hprr::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(HPRR_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(__aarch64__) || defined(__ARM_NEON)
  return &detail::kNeonTable;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("HPRR_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return scalar_kernels();
  if (want == "avx2" || want == "auto") {
    if (const auto* t = avx2_kernels()) return *t;
  }
  if (want == "neon" || want == "auto") {
    if (const auto* t = neon_kernels()) return *t;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols, std::span<const double> x,
          std::span<double> y) {
  assert(a.size() == rows * cols && x.size() == cols && y.size() == rows);
  active().gemv(a.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  assert(a.size() == rows * cols && x.size() == rows && y.size() == cols);
  active().gemv_t(a.data(), rows, cols, x.data(), y.data());
}

void weighted_gram(std::span<const double> a, std::size_t rows, std::size_t cols,
                   std::span<const double> w, std::span<double> out) {
  assert(a.size() == rows * cols && out.size() == cols * cols);
  assert(w.empty() || w.size() == rows);
  active().weighted_gram(a.data(), rows, cols, w.empty() ? nullptr : w.data(), out.data());
}

}  // namespace hprr::simd
