#include "hprr/simplex.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "hprr/simd/kernels.hpp"

namespace hprr::solvers {

void LinearProgram::set_objective(std::vector<double> cost) {
  if (cost.size() != n_) throw std::invalid_argument("objective size mismatch");
  cost_ = std::move(cost);
}

void LinearProgram::add_constraint(std::vector<double> coefficients, Sense sense, double rhs) {
  if (coefficients.size() != n_) throw std::invalid_argument("constraint size mismatch");
  rows_.push_back({std::move(coefficients), sense, rhs});
}

namespace {

// Tableau: m constraint rows then one objective row, each of width cols+1 (last = rhs).
class Tableau {
public:
  Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), width_(cols + 1),
                                             data_((m + 1) * (cols + 1), 0.0), basis_(m, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  std::span<double> row(std::size_t r) { return {data_.data() + r * width_, width_}; }
  std::size_t obj() const { return m_; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (auto& v : row(pr)) v *= inv;
    at(pr, pc) = 1.0;
    const auto prow = row(pr);
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      simd::axpy(-f, prow, row(r));
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Load the objective row as reduced costs for cost vector c over current basis.
  void price(const std::vector<double>& c) {
    auto o = row(obj());
    for (std::size_t j = 0; j < width_; ++j) o[j] = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) o[j] = c[j];
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = basis_[r] < c.size() ? c[basis_[r]] : 0.0;
      if (cb != 0.0) simd::axpy(-cb, row(r), o);
    }
  }

  // Returns Optimal, Unbounded or IterationLimit. allowed(j) filters entering columns.
  template <typename Allowed>
  LpStatus optimize(const SimplexOptions& opt, std::size_t& pivots, Allowed allowed) {
    const double tol = opt.tolerance;
    std::size_t degenerate_run = 0;
    double last_obj = -at(obj(), cols_);
    while (true) {
      const bool bland = degenerate_run > 50;
      std::size_t enter = cols_;
      double best = -tol;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allowed(j)) continue;
        const double d = at(obj(), j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == cols_) return LpStatus::Optimal;
      std::size_t leave = m_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= tol) continue;
        const double q = at(r, cols_) / a;
        if (q < ratio - tol || (std::abs(q - ratio) <= tol && leave < m_ && basis_[r] < basis_[leave])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave == m_) return LpStatus::Unbounded;
      pivot(leave, enter);
      if (++pivots >= opt.max_pivots) return LpStatus::IterationLimit;
      const double now = -at(obj(), cols_);
      degenerate_run = std::abs(now - last_obj) <= tol ? degenerate_run + 1 : 0;
      last_obj = now;
    }
  }

private:
  std::size_t m_, cols_, width_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult LinearProgram::minimize(const SimplexOptions& options) const {
  const std::size_t m = rows_.size();
  // Column layout: originals | one slack/surplus per inequality | artificials.
  std::size_t slack_count = 0;
  for (const auto& r : rows_) {
    if (r.sense != Sense::Equal) ++slack_count;
  }
  std::vector<bool> needs_artificial(m, false);
  std::vector<double> sign(m, 1.0);
  std::size_t artificial_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = rows_[i];
    sign[i] = r.rhs < 0.0 ? -1.0 : 1.0;
    Sense s = r.sense;
    if (sign[i] < 0.0 && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
    needs_artificial[i] = s != Sense::LessEqual;
    if (needs_artificial[i]) ++artificial_count;
  }
  const std::size_t art_begin = n_ + slack_count;
  const std::size_t cols = art_begin + artificial_count;
  Tableau t(m, cols);

  std::size_t slack = n_, art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = rows_[i];
    for (std::size_t j = 0; j < n_; ++j) t.at(i, j) = sign[i] * r.a[j];
    t.rhs(i) = sign[i] * r.rhs;
    std::size_t basic = cols;
    if (r.sense != Sense::Equal) {
      const double s = (r.sense == Sense::LessEqual ? 1.0 : -1.0) * sign[i];
      t.at(i, slack) = s;
      if (s > 0.0) basic = slack;
      ++slack;
    }
    if (needs_artificial[i]) {
      t.at(i, art) = 1.0;
      basic = art++;
    }
    t.basis()[i] = basic;
  }

  LpResult result;
  const double tol = options.tolerance;

  // Phase 1: minimise the sum of artificials.
  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = art_begin; j < cols; ++j) phase1[j] = 1.0;
    t.price(phase1);
    const auto st = t.optimize(options, result.pivots, [](std::size_t) { return true; });
    if (st == LpStatus::IterationLimit) {
      result.status = st;
      return result;
    }
    const double infeasibility = -t.at(t.obj(), cols);
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (needs_artificial[i]) scale = std::max(scale, std::abs(rows_[i].rhs));
    }
    if (infeasibility > tol * scale * 10.0) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(t.at(i, j)) > tol) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 over non-artificial columns; redundant rows keep a zero artificial.
  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n_; ++j) phase2[j] = cost_[j];
  t.price(phase2);
  const auto st = t.optimize(options, result.pivots, [&](std::size_t j) { return j < art_begin; });
  if (st != LpStatus::Optimal) {
    result.status = st;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n_, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis()[i] < n_) result.x[t.basis()[i]] = std::max(0.0, t.rhs(i));
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n_; ++j) result.objective += cost_[j] * result.x[j];
  return result;
}

}  // namespace hprr::solvers
