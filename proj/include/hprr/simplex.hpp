#pragma once

#include <cstddef>
#include <vector>

namespace hprr::solvers {

enum class Sense { LessEqual, GreaterEqual, Equal };

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  std::size_t max_pivots = 200000;
};

/// Dense two-phase primal simplex for min c^T x subject to rows and x >= 0.
/// Dantzig pricing, switching to Bland's rule after a run of degenerate pivots.
class LinearProgram {
public:
  explicit LinearProgram(std::size_t variables) : n_(variables), cost_(variables, 0.0) {}

  std::size_t variables() const noexcept { return n_; }
  std::size_t constraints() const noexcept { return rows_.size(); }

  void set_objective(std::vector<double> cost);
  void add_constraint(std::vector<double> coefficients, Sense sense, double rhs);

  LpResult minimize(const SimplexOptions& options = {}) const;

private:
  struct Row {
    std::vector<double> a;
    Sense sense;
    double rhs;
  };
  std::size_t n_;
  std::vector<double> cost_;
  std::vector<Row> rows_;
};

}  // namespace hprr::solvers
