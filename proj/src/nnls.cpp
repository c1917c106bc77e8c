#include "hprr/nnls.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hprr/simd/kernels.hpp"

namespace hprr::solvers {
namespace {

// w = A^T (b - A x)
Eigen::VectorXd dual(const RowMatrix& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());
  const std::span<const double> data(a.data(), rows * cols);
  Eigen::VectorXd ax(a.rows());
  simd::gemv(data, rows, cols, {x.data(), cols}, {ax.data(), rows});
  const Eigen::VectorXd r = b - ax;
  Eigen::VectorXd w(a.cols());
  simd::gemv_t(data, rows, cols, {r.data(), rows}, {w.data(), cols});
  return w;
}

// Least squares restricted to the passive columns; other entries are zero.
Eigen::VectorXd passive_solve(const RowMatrix& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[j]) cols.push_back(j);
  }
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
  return z;
}

}  // namespace

NnlsResult nnls(const RowMatrix& a_in, const Eigen::VectorXd& b_in, const NnlsOptions& options) {
  const Eigen::Index n = a_in.cols();
  RowMatrix a = a_in;
  Eigen::VectorXd b = b_in;
  if (options.tikhonov > 0.0) {
    a.conservativeResize(a_in.rows() + n, n);
    a.bottomRows(n) = std::sqrt(options.tikhonov) * RowMatrix::Identity(n, n);
    b.conservativeResize(b_in.rows() + n);
    b.tail(n).setZero();
  }

  NnlsResult result;
  result.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    result.converged = true;
    result.residual_norm = b_in.norm();
    return result;
  }
  const int max_iter = options.max_iterations > 0 ? options.max_iterations : 5 * static_cast<int>(n) + 10;
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(a.rows(), n)) * std::max(1.0, a.norm()) *
                     std::max(1.0, b.norm());

  std::vector<bool> passive(n, false);
  std::vector<bool> blocked(n, false);  // columns whose entry step produced z <= 0
  Eigen::VectorXd& x = result.x;
  Eigen::VectorXd w = dual(a, b, x);

  while (result.iterations < max_iter) {
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && !blocked[j] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) {
      result.converged = true;
      break;
    }
    ++result.iterations;
    passive[t] = true;

    Eigen::VectorXd z = passive_solve(a, b, passive);
    if (z(t) <= 0.0) {
      // The entering column cannot move off zero; skip it until x changes.
      passive[t] = false;
      blocked[t] = true;
      continue;
    }
    while (true) {
      bool all_positive = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) all_positive = false;
      }
      if (all_positive) break;
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
      z = passive_solve(a, b, passive);
    }
    x = z;
    std::fill(blocked.begin(), blocked.end(), false);
    w = dual(a, b, x);
  }

  for (Eigen::Index j = 0; j < n; ++j) x(j) = std::max(0.0, x(j));
  result.residual_norm = (a_in * x - b_in).norm();
  return result;
}

}  // namespace hprr::solvers
