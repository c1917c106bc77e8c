#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hprr/aspects.hpp"
#include "hprr/meteor.hpp"
#include "hprr/metrics.hpp"

namespace hprr::reward {

/// All weights 1.0, so the reward is the plain sum of the nine metrics.
WeightVector uniform_weights();

/// Laplace-smoothed adapted Bradley-Terry weights fitted on human arena votes.
WeightVector human_aligned_weights();

/// {"Cr": w, ..., "ReME": w}; every key required. Tagged custom.
WeightVector weights_from_json(const nlohmann::json& j);
WeightVector load_weights(const std::string& path);
nlohmann::json to_json(const WeightVector& w);

/// "uniform", "human" or a path to a weight config.
WeightVector resolve_weights(std::string_view spec);

struct ScoredReview {
  std::string id;
  std::string system;
  MetricVector metrics;
  double reward_uniform = 0.0;
  double reward_human = 0.0;
};

/// Eight sentence-normalized aspects plus METEOR(review, manuscript).
/// Throws ValidationError("empty review") for blank reviews.
MetricVector compute_metric_vector(std::string_view review_id, std::string_view review,
                                   std::string_view manuscript,
                                   const aspects::AspectScorer& scorer,
                                   const meteor::AlignOptions& align = {});

/// Weighted sum of the nine metrics.
double hprr(const MetricVector& v, const WeightVector& w);

/// Rewards for a batch of vectors in one pass over a row-major matrix.
std::vector<double> hprr_batch(std::span<const MetricVector> vectors, const WeightVector& w);

ScoredReview make_scored(std::string id, std::string system, const MetricVector& v);

nlohmann::json to_json(const ScoredReview& r);
/// Parses a scored-review record; stored reward fields are optional.
ScoredReview scored_from_json(const nlohmann::json& j);

}  // namespace hprr::reward
