#pragma once

#include <Eigen/Dense>

namespace hprr::solvers {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct NnlsOptions {
  // Adds tikhonov * ||x||^2 to the objective. A tiny positive value selects the
  // minimum-norm solution when the non-negative optimum is not unique.
  double tikhonov = 0.0;
  int max_iterations = 0;  // 0 means 5 * columns + 10
};

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
NnlsResult nnls(const RowMatrix& a, const Eigen::VectorXd& b, const NnlsOptions& options = {});

}  // namespace hprr::solvers
