#include "hprr/reward.hpp"

#include <fstream>

#include "hprr/error.hpp"
#include "hprr/simd/kernels.hpp"
#include "hprr/textproc.hpp"

namespace hprr::reward {

WeightVector uniform_weights() {
  WeightVector w;
  w.values.fill(1.0);
  w.tag = WeightTag::Uniform;
  return w;
}

WeightVector human_aligned_weights() {
  WeightVector w;
  w.values = {0.01, 0.01, 0.11, 0.01, 0.01, 0.01, 0.01, 0.16, 8.67};
  w.tag = WeightTag::HumanAligned;
  return w;
}

WeightVector weights_from_json(const nlohmann::json& j) {
  WeightVector w;
  w.values = metrics_from_json_object(j);
  w.tag = WeightTag::Custom;
  w.validate();
  return w;
}

WeightVector load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open weight config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("weight config " + path + ": " + e.what());
  }
  return weights_from_json(j);
}

nlohmann::json to_json(const WeightVector& w) { return to_json_object(w.values); }

WeightVector resolve_weights(std::string_view spec) {
  if (spec == "uniform") return uniform_weights();
  if (spec == "human" || spec == "human_aligned") return human_aligned_weights();
  return load_weights(std::string(spec));
}

MetricVector compute_metric_vector(std::string_view review_id, std::string_view review,
                                   std::string_view manuscript,
                                   const aspects::AspectScorer& scorer,
                                   const meteor::AlignOptions& align) {
  const auto sentences = text::split_sentences(review);
  if (sentences.empty()) throw ValidationError("empty review");
  const auto labels = scorer.score(review_id, sentences);
  const AspectVector aspect_vector = aspects::normalize(labels, sentences);
  const auto stats = meteor::meteor_score(text::tokenize(review), text::tokenize(manuscript), align);
  MetricVector v(aspect_vector, stats.score);
  v.validate();
  return v;
}

double hprr(const MetricVector& v, const WeightVector& w) {
  return simd::dot(v.values, w.values);
}

std::vector<double> hprr_batch(std::span<const MetricVector> vectors, const WeightVector& w) {
  std::vector<double> matrix;
  matrix.reserve(vectors.size() * kMetricCount);
  for (const auto& v : vectors) matrix.insert(matrix.end(), v.values.begin(), v.values.end());
  std::vector<double> out(vectors.size());
  simd::gemv(matrix, vectors.size(), kMetricCount, w.values, out);
  return out;
}

ScoredReview make_scored(std::string id, std::string system, const MetricVector& v) {
  ScoredReview r;
  r.id = std::move(id);
  r.system = std::move(system);
  r.metrics = v;
  r.reward_uniform = hprr(v, uniform_weights());
  r.reward_human = hprr(v, human_aligned_weights());
  return r;
}

nlohmann::json to_json(const ScoredReview& r) {
  return {{"id", r.id},
          {"system", r.system},
          {"metrics", to_json_object(r.metrics.values)},
          {"reward_uniform", r.reward_uniform},
          {"reward_human", r.reward_human}};
}

ScoredReview scored_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("scored review must be a JSON object");
  ScoredReview r;
  const auto system = j.find("system");
  if (system == j.end() || !system->is_string() || system->get<std::string>().empty()) {
    throw ValidationError("missing system label");
  }
  r.system = system->get<std::string>();
  if (const auto id = j.find("id"); id != j.end() && id->is_string()) r.id = id->get<std::string>();
  const auto metrics = j.find("metrics");
  if (metrics == j.end()) throw ValidationError("missing metrics");
  r.metrics = MetricVector(metrics_from_json_object(*metrics));
  r.metrics.validate();
  auto number = [&](const char* key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ValidationError(std::string(key) + " is not a number");
    return it->get<double>();
  };
  r.reward_uniform = number("reward_uniform", hprr(r.metrics, uniform_weights()));
  r.reward_human = number("reward_human", hprr(r.metrics, human_aligned_weights()));
  return r;
}

}  // namespace hprr::reward
