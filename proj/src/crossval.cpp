#include <algorithm>
#include <cmath>
#include <random>

#include "hprr/error.hpp"
#include "hprr/prefit.hpp"
#include "hprr/random.hpp"

namespace hprr::prefit {

const Weights& stage_weights(const FitResult& r, WeightStage stage) {
  switch (stage) {
    case WeightStage::Raw: return r.raw;
    case WeightStage::Positive: return r.positive;
    case WeightStage::Smoothed: return r.smoothed;
  }
  return r.smoothed;
}

Outcome predict(const Weights& weights, const PreferenceMatch& match, double tie_band) {
  double norm = 0.0;
  for (double w : weights) norm += std::abs(w);
  if (norm == 0.0) return Outcome::Tie;
  double diff = 0.0;
  for (std::size_t i = 0; i < kMetricCount; ++i) diff += weights[i] / norm * (match.a[i] - match.b[i]);
  if (std::abs(diff) <= tie_band) return Outcome::Tie;
  return diff > 0.0 ? Outcome::ABetter : Outcome::BBetter;
}

double macro_f1(const std::vector<Outcome>& truth, const std::vector<Outcome>& predicted) {
  if (truth.size() != predicted.size()) throw Error("macro_f1: size mismatch");
  double total = 0.0;
  for (Outcome cls : {Outcome::ABetter, Outcome::BBetter, Outcome::Tie}) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool t = truth[i] == cls;
      const bool p = predicted[i] == cls;
      if (t && p) ++tp;
      else if (p) ++fp;
      else if (t) ++fn;
    }
    const std::size_t denom = 2 * tp + fp + fn;
    total += denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return total / 3.0;
}

std::vector<std::size_t> stratified_folds(const std::vector<PreferenceMatch>& matches,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("need at least two folds");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> assignment(matches.size(), 0);
  std::size_t offset = 0;
  for (Outcome cls : {Outcome::ABetter, Outcome::BBetter, Outcome::Tie}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (matches[i].outcome == cls) idx.push_back(i);
    }
    shuffle(idx, rng);
    // Continue the round-robin across classes so fold sizes stay balanced.
    for (std::size_t k = 0; k < idx.size(); ++k) assignment[idx[k]] = (offset + k) % folds;
    offset = (offset + idx.size()) % folds;
  }
  return assignment;
}

double select_tie_band(const Weights& weights, const std::vector<PreferenceMatch>& matches,
                       std::size_t grid_points, double band_max) {
  std::vector<Outcome> truth;
  truth.reserve(matches.size());
  for (const auto& m : matches) truth.push_back(m.outcome);
  double best_band = 0.0;
  double best_f1 = -1.0;
  std::vector<Outcome> pred(matches.size());
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double band = grid_points > 1 ? band_max * static_cast<double>(g) /
                                              static_cast<double>(grid_points - 1)
                                        : 0.0;
    for (std::size_t i = 0; i < matches.size(); ++i) pred[i] = predict(weights, matches[i], band);
    const double f1 = macro_f1(truth, pred);
    if (f1 > best_f1) {
      best_f1 = f1;
      best_band = band;
    }
  }
  return best_band;
}

CvReport cross_validate(const std::vector<PreferenceMatch>& matches, Estimator estimator,
                        const CvOptions& options) {
  if (matches.size() < options.folds) {
    throw ValidationError("need at least " + std::to_string(options.folds) + " matches for " +
                          std::to_string(options.folds) + "-fold cross-validation");
  }
  const auto assignment = stratified_folds(matches, options.folds, options.seed);
  CvReport report;
  report.seed = options.seed;
  for (std::size_t fold = 0; fold < options.folds; ++fold) {
    std::vector<PreferenceMatch> train, test;
    for (std::size_t i = 0; i < matches.size(); ++i) {
      (assignment[i] == fold ? test : train).push_back(matches[i]);
    }
    const FitResult fitted = fit(train, estimator, options.fit);
    const Weights& w = stage_weights(fitted, options.stage);
    const double band = select_tie_band(w, train, options.tie_grid_points, options.tie_band_max);
    std::vector<Outcome> truth, pred;
    for (const auto& m : test) {
      truth.push_back(m.outcome);
      pred.push_back(predict(w, m, band));
    }
    report.fold_f1.push_back(macro_f1(truth, pred));
    report.tie_bands.push_back(band);
  }
  double sum = 0.0;
  for (double f : report.fold_f1) sum += f;
  report.mean_f1 = sum / static_cast<double>(report.fold_f1.size());
  return report;
}

}  // namespace hprr::prefit
