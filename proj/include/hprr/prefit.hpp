#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hprr/metrics.hpp"

namespace hprr::prefit {

using Weights = std::array<double, kMetricCount>;

enum class Outcome { ABetter, BBetter, Tie };

std::string_view to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);

/// One arena vote between two reviews of the same paper.
struct PreferenceMatch {
  std::string paper_id;
  std::string reviewer_id;
  MetricVector a;
  MetricVector b;
  Outcome outcome = Outcome::Tie;

  /// Covariate difference a - b.
  Weights difference() const;
};

enum class Estimator { BradleyTerry, AdaptedBradleyTerry, ConstrainedReward };

std::string_view to_string(Estimator e);
std::optional<Estimator> estimator_from_string(std::string_view s);

enum class SlackMode { Hard, Soft };

struct BtOptions {
  double inverse_regularization = 1.0;  // C in 0.5 ||w||^2 + C * sum(loss)
  int max_iterations = 100;
  double tolerance = 1e-10;
};

struct AbtOptions {
  // Tikhonov weight relative to ||X||_F^2; picks the minimum-norm solution when
  // the non-negative least-squares optimum is not unique.
  double min_norm_ridge = 1e-12;
};

struct CrmOptions {
  double epsilon = 1e-12;
  double l1_lambda = 0.1;
  SlackMode slack_mode = SlackMode::Soft;
  double slack_penalty = 1000.0;
};

struct FitOptions {
  BtOptions bt;
  AbtOptions abt;
  CrmOptions crm;
  double alpha = 0.01;  // Laplace smoothing
};

struct FitResult {
  Estimator estimator = Estimator::AdaptedBradleyTerry;
  Weights raw{};
  Weights positive{};  // min-max scaled, summing to nine
  Weights smoothed{};  // Laplace smoothed, summing to nine
  double cv_f1 = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> fold_f1;
  std::vector<double> tie_bands;
  std::uint64_t seed = 0;
  std::size_t violations = 0;  // soft-mode CRM only
  std::vector<std::string> warnings;
};

/// Logistic regression without intercept on a - b; ties become two half-weight rows.
FitResult fit_bt(const std::vector<PreferenceMatch>& matches, const FitOptions& options = {});

/// Non-negative least squares of y in {+1, 0, -1} on a - b, no intercept.
FitResult fit_abt(const std::vector<PreferenceMatch>& matches, const FitOptions& options = {});

/// min sum(c) s.t. c >= 0, sum(c) <= 1 and one ordering constraint per match
/// with margin epsilon. Soft mode adds a penalised slack per match.
FitResult fit_crm(const std::vector<PreferenceMatch>& matches, const FitOptions& options = {});

FitResult fit(const std::vector<PreferenceMatch>& matches, Estimator estimator,
              const FitOptions& options = {});

/// Min-max scale the nine components to [0, 1], then rescale to sum to nine.
/// Throws Error("degenerate min-max") when all components are equal.
Weights min_max_to_nine(const Weights& raw);

/// (w + alpha) * 9 / sum(w + alpha)
Weights laplace_smooth(const Weights& w, double alpha = 0.01);

/// min_max_to_nine followed by laplace_smooth.
Weights adjust_weights(const Weights& raw, double alpha = 0.01);

// Cross-validation ----------------------------------------------------------

enum class WeightStage { Raw, Positive, Smoothed };

struct CvOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  WeightStage stage = WeightStage::Smoothed;
  std::size_t tie_grid_points = 21;
  double tie_band_max = 0.1;
  FitOptions fit;
};

struct CvReport {
  double mean_f1 = 0.0;
  std::vector<double> fold_f1;
  std::vector<double> tie_bands;
  std::uint64_t seed = 0;
};

/// Three-way prediction from normalized weights: tie when |s_a - s_b| <= tie_band.
/// Weights are divided by their absolute sum first, so the decision is scale-free.
Outcome predict(const Weights& weights, const PreferenceMatch& match, double tie_band);

/// Macro F1 over the three outcomes; a class absent from both truth and
/// prediction contributes 0.
double macro_f1(const std::vector<Outcome>& truth, const std::vector<Outcome>& predicted);

/// Fold index per match, stratified by outcome, shuffled with the seed.
std::vector<std::size_t> stratified_folds(const std::vector<PreferenceMatch>& matches,
                                          std::size_t folds, std::uint64_t seed);

/// Tie band from the grid that maximises macro F1 on the given matches (smallest on ties).
double select_tie_band(const Weights& weights, const std::vector<PreferenceMatch>& matches,
                       std::size_t grid_points, double band_max);

CvReport cross_validate(const std::vector<PreferenceMatch>& matches, Estimator estimator,
                        const CvOptions& options = {});

const Weights& stage_weights(const FitResult& r, WeightStage stage);

// Serialization --------------------------------------------------------------

/// One JSON record: paper_id, reviewer_id, covariates_a, covariates_b, outcome.
/// Covariates may be an array of nine numbers or an object keyed by metric name.
PreferenceMatch match_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PreferenceMatch& m);
std::vector<PreferenceMatch> load_preferences(const std::string& path);

nlohmann::json to_json(const FitResult& r);

}  // namespace hprr::prefit
