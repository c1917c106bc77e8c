#include "hprr/prefit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "hprr/error.hpp"
#include "hprr/jsonl.hpp"
#include "hprr/nnls.hpp"
#include "hprr/simd/kernels.hpp"
#include "hprr/simplex.hpp"

namespace hprr::prefit {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ABetter: return "A";
    case Outcome::BBetter: return "B";
    case Outcome::Tie: return "TIE";
  }
  return "TIE";
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
  if (s == "A") return Outcome::ABetter;
  if (s == "B") return Outcome::BBetter;
  if (s == "TIE") return Outcome::Tie;
  return std::nullopt;
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::BradleyTerry: return "bt";
    case Estimator::AdaptedBradleyTerry: return "abt";
    case Estimator::ConstrainedReward: return "crm";
  }
  return "abt";
}

std::optional<Estimator> estimator_from_string(std::string_view s) {
  if (s == "bt") return Estimator::BradleyTerry;
  if (s == "abt") return Estimator::AdaptedBradleyTerry;
  if (s == "crm") return Estimator::ConstrainedReward;
  return std::nullopt;
}

Weights PreferenceMatch::difference() const {
  Weights d{};
  for (std::size_t i = 0; i < kMetricCount; ++i) d[i] = a[i] - b[i];
  return d;
}

// Weight post-processing -----------------------------------------------------

Weights min_max_to_nine(const Weights& raw) {
  for (double v : raw) {
    if (!std::isfinite(v)) throw ValidationError("raw weights must be finite");
  }
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  if (!(span > 0.0)) throw Error("degenerate min-max: all weights equal");
  Weights w{};
  for (std::size_t i = 0; i < kMetricCount; ++i) w[i] = (raw[i] - lo) / span;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v *= static_cast<double>(kMetricCount) / total;
  return w;
}

Weights laplace_smooth(const Weights& w, double alpha) {
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be non-negative");
  double total = 0.0;
  for (double v : w) total += v + alpha;
  if (!(total > 0.0)) throw Error("cannot smooth an all-zero weight vector with alpha = 0");
  Weights out{};
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    out[i] = (w[i] + alpha) * static_cast<double>(kMetricCount) / total;
  }
  return out;
}

Weights adjust_weights(const Weights& raw, double alpha) {
  return laplace_smooth(min_max_to_nine(raw), alpha);
}

namespace {

void finish(FitResult& r, double alpha) {
  try {
    r.positive = min_max_to_nine(r.raw);
    r.smoothed = laplace_smooth(r.positive, alpha);
  } catch (const Error&) {
    r.positive.fill(1.0);
    r.smoothed.fill(1.0);
    r.warnings.push_back("degenerate min-max: fell back to uniform weights");
  }
}

struct Design {
  solvers::RowMatrix x;  // rows are covariate differences
  Eigen::VectorXd y;
  Eigen::VectorXd s;  // row weights
};

}  // namespace

// Bradley-Terry ---------------------------------------------------------------

FitResult fit_bt(const std::vector<PreferenceMatch>& matches, const FitOptions& options) {
  std::size_t decisive = 0;
  std::size_t ties = 0;
  for (const auto& m : matches) {
    if (m.outcome == Outcome::Tie) ++ties; else ++decisive;
  }
  if (decisive == 0) throw Error("no decisive matches");

  const std::size_t rows = decisive + 2 * ties;
  const std::size_t p = kMetricCount;
  Design d;
  d.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
  d.y.resize(static_cast<Eigen::Index>(rows));
  d.s.resize(static_cast<Eigen::Index>(rows));
  Eigen::Index r = 0;
  auto put = [&](const Weights& diff, double label, double weight) {
    for (std::size_t j = 0; j < p; ++j) d.x(r, static_cast<Eigen::Index>(j)) = diff[j];
    d.y(r) = label;
    d.s(r) = weight;
    ++r;
  };
  for (const auto& m : matches) {
    const Weights diff = m.difference();
    switch (m.outcome) {
      case Outcome::ABetter: put(diff, 1.0, 1.0); break;
      case Outcome::BBetter: put(diff, 0.0, 1.0); break;
      case Outcome::Tie:
        put(diff, 1.0, 0.5);
        put(diff, 0.0, 0.5);
        break;
    }
  }

  const double c = options.bt.inverse_regularization;
  if (!(c > 0.0)) throw ValidationError("inverse regularization must be positive");
  const std::span<const double> xdata(d.x.data(), rows * p);

  auto objective = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(rows));
    simd::gemv(xdata, rows, p, {w.data(), p}, {z.data(), rows});
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      // log(1 + e^z) - y z, evaluated stably
      const double zi = z(i);
      const double softplus = zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
      loss += d.s(i) * (softplus - d.y(i) * zi);
    }
    return 0.5 * w.squaredNorm() + c * loss;
  };

  FitResult result;
  result.estimator = Estimator::BradleyTerry;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  Eigen::VectorXd z(static_cast<Eigen::Index>(rows)), residual(static_cast<Eigen::Index>(rows)),
      curvature(static_cast<Eigen::Index>(rows));
  Eigen::VectorXd grad(static_cast<Eigen::Index>(p));
  Eigen::MatrixXd hess(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  std::vector<double> gram(p * p);
  bool converged = false;
  double f = objective(w);
  for (int it = 0; it < options.bt.max_iterations; ++it) {
    simd::gemv(xdata, rows, p, {w.data(), p}, {z.data(), rows});
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double prob = 1.0 / (1.0 + std::exp(-z(i)));
      residual(i) = c * d.s(i) * (prob - d.y(i));
      curvature(i) = c * d.s(i) * prob * (1.0 - prob);
    }
    simd::gemv_t(xdata, rows, p, {residual.data(), rows}, {grad.data(), p});
    grad += w;
    if (grad.lpNorm<Eigen::Infinity>() < options.bt.tolerance) {
      converged = true;
      break;
    }
    simd::weighted_gram(xdata, rows, p, {curvature.data(), rows}, gram);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gram[i * p + j];
      }
    }
    hess.diagonal().array() += 1.0;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    double t = 1.0;
    Eigen::VectorXd next = w - step;
    double fn = objective(next);
    while (fn > f - 1e-4 * t * grad.dot(step) && t > 1e-10) {
      t *= 0.5;
      next = w - t * step;
      fn = objective(next);
    }
    w = next;
    f = fn;
  }
  if (!converged) result.warnings.push_back("logistic regression did not reach tolerance");
  for (std::size_t j = 0; j < p; ++j) result.raw[j] = w(static_cast<Eigen::Index>(j));
  finish(result, options.alpha);
  return result;
}

// Adapted Bradley-Terry -------------------------------------------------------

FitResult fit_abt(const std::vector<PreferenceMatch>& matches, const FitOptions& options) {
  if (matches.empty()) throw Error("no matches");
  const auto n = static_cast<Eigen::Index>(matches.size());
  const auto p = static_cast<Eigen::Index>(kMetricCount);
  solvers::RowMatrix x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& m = matches[static_cast<std::size_t>(i)];
    const Weights diff = m.difference();
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = diff[static_cast<std::size_t>(j)];
    y(i) = m.outcome == Outcome::ABetter ? 1.0 : (m.outcome == Outcome::BBetter ? -1.0 : 0.0);
  }
  const double scale = x.squaredNorm();
  if (scale == 0.0) throw Error("degenerate design: every covariate difference is zero");

  FitResult result;
  result.estimator = Estimator::AdaptedBradleyTerry;
  if (matches.size() < kMetricCount) {
    result.warnings.push_back("fewer matches than weights; solution is under-determined");
  }
  solvers::NnlsOptions nnls_options;
  nnls_options.tikhonov = options.abt.min_norm_ridge * scale;
  const auto solved = solvers::nnls(x, y, nnls_options);
  if (!solved.converged) result.warnings.push_back("NNLS hit its iteration limit");
  for (Eigen::Index j = 0; j < p; ++j) result.raw[static_cast<std::size_t>(j)] = solved.x(j);
  finish(result, options.alpha);
  return result;
}

// Constrained reward model ----------------------------------------------------

namespace {

struct CrmSolution {
  solvers::LpStatus status;
  Weights weights{};
  std::size_t violations = 0;
};

// Variables are scaled by epsilon (c = epsilon * c') so the margin becomes 1
// and the simplex tolerances stay meaningful for tiny epsilon.
CrmSolution solve_crm(const std::vector<PreferenceMatch>& matches, const CrmOptions& opt,
                      bool soft) {
  const std::size_t p = kMetricCount;
  std::size_t slack_vars = soft ? matches.size() : 0;
  solvers::LinearProgram lp(p + slack_vars);
  std::vector<double> cost(p + slack_vars, 0.0);
  for (std::size_t j = 0; j < p; ++j) cost[j] = 1.0 + opt.l1_lambda;
  for (std::size_t k = 0; k < slack_vars; ++k) cost[p + k] = opt.slack_penalty;
  lp.set_objective(cost);

  std::vector<double> total(p + slack_vars, 0.0);
  for (std::size_t j = 0; j < p; ++j) total[j] = 1.0;
  lp.add_constraint(total, solvers::Sense::LessEqual, 1.0 / opt.epsilon);

  for (std::size_t k = 0; k < matches.size(); ++k) {
    const Weights diff = matches[k].difference();
    std::vector<double> row(p + slack_vars, 0.0);
    for (std::size_t j = 0; j < p; ++j) row[j] = diff[j];
    switch (matches[k].outcome) {
      case Outcome::ABetter:
        if (soft) row[p + k] = 1.0;
        lp.add_constraint(row, solvers::Sense::GreaterEqual, 1.0);
        break;
      case Outcome::BBetter:
        for (std::size_t j = 0; j < p; ++j) row[j] = -row[j];
        if (soft) row[p + k] = 1.0;
        lp.add_constraint(row, solvers::Sense::GreaterEqual, 1.0);
        break;
      case Outcome::Tie:
        if (!soft) {
          lp.add_constraint(row, solvers::Sense::Equal, 0.0);
        } else {
          row[p + k] = 1.0;
          lp.add_constraint(row, solvers::Sense::GreaterEqual, 0.0);
          std::vector<double> neg(p + slack_vars, 0.0);
          for (std::size_t j = 0; j < p; ++j) neg[j] = -diff[j];
          neg[p + k] = 1.0;
          lp.add_constraint(neg, solvers::Sense::GreaterEqual, 0.0);
        }
        break;
    }
  }

  const auto solved = lp.minimize();
  CrmSolution out;
  out.status = solved.status;
  if (solved.status != solvers::LpStatus::Optimal) return out;
  for (std::size_t j = 0; j < p; ++j) out.weights[j] = opt.epsilon * solved.x[j];
  for (std::size_t k = 0; k < slack_vars; ++k) {
    if (solved.x[p + k] > 1e-6) ++out.violations;
  }
  return out;
}

}  // namespace

FitResult fit_crm(const std::vector<PreferenceMatch>& matches, const FitOptions& options) {
  const CrmOptions& opt = options.crm;
  if (matches.empty()) throw Error("no matches");
  if (!(opt.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(opt.l1_lambda >= 0.0)) throw ValidationError("l1_lambda must be non-negative");

  FitResult result;
  result.estimator = Estimator::ConstrainedReward;
  if (opt.slack_mode == SlackMode::Hard) {
    const auto hard = solve_crm(matches, opt, false);
    if (hard.status == solvers::LpStatus::Infeasible) {
      const auto soft = solve_crm(matches, opt, true);
      const std::size_t conflicts = soft.status == solvers::LpStatus::Optimal ? soft.violations : 0;
      throw InfeasibleError("infeasible; rerun with soft mode (" + std::to_string(conflicts) +
                                " conflicting matches)",
                            conflicts);
    }
    if (hard.status != solvers::LpStatus::Optimal) throw Error("constrained fit did not converge");
    result.raw = hard.weights;
  } else {
    const auto soft = solve_crm(matches, opt, true);
    if (soft.status != solvers::LpStatus::Optimal) throw Error("constrained fit did not converge");
    result.raw = soft.weights;
    result.violations = soft.violations;
    if (soft.violations > 0) {
      result.warnings.push_back(std::to_string(soft.violations) + " match constraints violated");
    }
  }
  finish(result, options.alpha);
  return result;
}

FitResult fit(const std::vector<PreferenceMatch>& matches, Estimator estimator,
              const FitOptions& options) {
  switch (estimator) {
    case Estimator::BradleyTerry: return fit_bt(matches, options);
    case Estimator::AdaptedBradleyTerry: return fit_abt(matches, options);
    case Estimator::ConstrainedReward: return fit_crm(matches, options);
  }
  throw Error("unknown estimator");
}

// Serialization ---------------------------------------------------------------

namespace {

MetricVector covariates_from_json(const nlohmann::json& j, const char* field) {
  MetricVector v;
  if (j.is_array()) {
    if (j.size() != kMetricCount) {
      throw ValidationError(std::string(field) + " must hold " + std::to_string(kMetricCount) +
                            " numbers");
    }
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      if (!j[i].is_number()) throw ValidationError(std::string(field) + " holds a non-number");
      v[i] = j[i].get<double>();
    }
  } else {
    v = MetricVector(metrics_from_json_object(j));
  }
  try {
    v.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(field) + ": " + e.what());
  }
  return v;
}

std::string string_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ValidationError(std::string(key) + " must be a string");
}

}  // namespace

PreferenceMatch match_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("preference record must be a JSON object");
  PreferenceMatch m;
  m.paper_id = string_field(j, "paper_id");
  m.reviewer_id = string_field(j, "reviewer_id");
  for (const char* key : {"covariates_a", "covariates_b", "outcome"}) {
    if (!j.contains(key)) throw ValidationError(std::string("missing ") + key);
  }
  m.a = covariates_from_json(j.at("covariates_a"), "covariates_a");
  m.b = covariates_from_json(j.at("covariates_b"), "covariates_b");
  const auto& out = j.at("outcome");
  if (!out.is_string()) throw ValidationError("outcome must be A, B or TIE");
  const auto parsed = outcome_from_string(out.get<std::string>());
  if (!parsed) throw ValidationError("outcome must be A, B or TIE");
  m.outcome = *parsed;
  return m;
}

nlohmann::json to_json(const PreferenceMatch& m) {
  return {{"paper_id", m.paper_id},
          {"reviewer_id", m.reviewer_id},
          {"covariates_a", m.a.values},
          {"covariates_b", m.b.values},
          {"outcome", to_string(m.outcome)}};
}

std::vector<PreferenceMatch> load_preferences(const std::string& path) {
  std::vector<PreferenceMatch> out;
  io::for_each_record_line(path, [&](std::size_t line_no, std::string_view line) {
    try {
      out.push_back(match_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json j = {{"estimator", to_string(r.estimator)},
                      {"raw_weights", to_json_object(r.raw)},
                      {"positive_weights", to_json_object(r.positive)},
                      {"smoothed_weights", to_json_object(r.smoothed)},
                      {"f1_average", "macro"},
                      {"fold_f1", r.fold_f1},
                      {"tie_bands", r.tie_bands},
                      {"seed", r.seed},
                      {"warnings", r.warnings}};
  j["cv_f1"] = std::isnan(r.cv_f1) ? nlohmann::json(nullptr) : nlohmann::json(r.cv_f1);
  if (r.estimator == Estimator::ConstrainedReward) j["violations"] = r.violations;
  return j;
}

}  // namespace hprr::prefit
