#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hprr/simd/kernels.hpp"

using namespace hprr::simd;

namespace {

std::vector<double> random_values(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Relative agreement scaled by the magnitude of the summed terms.
void check_close(const std::vector<double>& a, const std::vector<double>& b, double scale) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-13 * scale);
}

// Every vector table available on this machine, checked against the scalar one.
std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  if (const auto* t = avx2_kernels()) out.push_back(t);
  if (const auto* t = neon_kernels()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("active table is one of the known tables") {
  const auto& t = active();
  CHECK((t.isa == Isa::Scalar || t.isa == Isa::Avx2 || t.isa == Isa::Neon));
  CHECK(to_string(Isa::Avx2) == "avx2");
  CHECK(scalar_kernels().isa == Isa::Scalar);
}

TEST_CASE("scalar kernels on hand-checked values") {
  const auto& s = scalar_kernels();
  const double x[] = {1, 2, 3};
  const double y[] = {4, -5, 6};
  CHECK(s.dot(x, y, 3) == doctest::Approx(12.0));
  double z[] = {1, 1, 1};
  s.axpy(2.0, x, z, 3);
  CHECK(z[0] == 3.0);
  CHECK(z[2] == 7.0);
  const double a[] = {1, 2, 3, 4, 5, 6};  // 2 x 3
  double out2[2];
  s.gemv(a, 2, 3, x, out2);
  CHECK(out2[0] == 14.0);
  CHECK(out2[1] == 32.0);
  const double v2[] = {1, -1};
  double out3[3];
  s.gemv_t(a, 2, 3, v2, out3);
  CHECK(out3[0] == -3.0);
  CHECK(out3[2] == -3.0);
  double g[9];
  s.weighted_gram(a, 2, 3, nullptr, g);
  CHECK(g[0] == 17.0);  // 1 + 16
  CHECK(g[1] == 22.0);  // 2 + 20
  CHECK(g[8] == 45.0);
  const double w[] = {2, 0};
  s.weighted_gram(a, 2, 3, w, g);
  CHECK(g[4] == 8.0);
}

TEST_CASE("vector kernels match scalar on ragged sizes") {
  std::mt19937_64 rng(7);
  const auto& s = scalar_kernels();
  for (const auto* t : vector_tables()) {
    CAPTURE(to_string(t->isa));
    for (std::size_t n = 0; n < 70; ++n) {
      const auto x = random_values(n, rng);
      const auto y = random_values(n, rng);
      const double scale = 4.0 * static_cast<double>(n + 1);
      CHECK(std::abs(s.dot(x.data(), y.data(), n) - t->dot(x.data(), y.data(), n)) <= 1e-13 * scale);

      auto ys = y, yv = y;
      s.axpy(0.75, x.data(), ys.data(), n);
      t->axpy(0.75, x.data(), yv.data(), n);
      check_close(ys, yv, 4.0);
    }
    for (std::size_t rows : {0u, 1u, 3u, 9u, 17u, 130u}) {
      for (std::size_t cols : {1u, 2u, 5u, 9u, 11u, 33u}) {
        CAPTURE(rows);
        CAPTURE(cols);
        const auto a = random_values(rows * cols, rng);
        const auto xc = random_values(cols, rng);
        const auto xr = random_values(rows, rng);
        const auto w = random_values(rows, rng);
        std::vector<double> ys(rows), yv(rows);
        s.gemv(a.data(), rows, cols, xc.data(), ys.data());
        t->gemv(a.data(), rows, cols, xc.data(), yv.data());
        check_close(ys, yv, 4.0 * static_cast<double>(cols + 1));

        std::vector<double> ts(cols), tv(cols);
        s.gemv_t(a.data(), rows, cols, xr.data(), ts.data());
        t->gemv_t(a.data(), rows, cols, xr.data(), tv.data());
        check_close(ts, tv, 4.0 * static_cast<double>(rows + 1));

        std::vector<double> gs(cols * cols), gv(cols * cols);
        s.weighted_gram(a.data(), rows, cols, w.data(), gs.data());
        t->weighted_gram(a.data(), rows, cols, w.data(), gv.data());
        check_close(gs, gv, 8.0 * static_cast<double>(rows + 1));
        s.weighted_gram(a.data(), rows, cols, nullptr, gs.data());
        t->weighted_gram(a.data(), rows, cols, nullptr, gv.data());
        check_close(gs, gv, 4.0 * static_cast<double>(rows + 1));
      }
    }
  }
}

TEST_CASE("span front-ends route to the active table") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y{5, 4, 3, 2, 1};
  CHECK(dot(x, y) == doctest::Approx(35.0));
  axpy(-1.0, x, y);
  CHECK(y[0] == 4.0);
  CHECK(y[4] == -4.0);
  std::vector<double> g(4, -1.0);
  const std::vector<double> a{1, 0, 0, 1};
  weighted_gram(a, 2, 2, {}, g);
  CHECK(g == std::vector<double>{1, 0, 0, 1});
}
