#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hprr/metrics.hpp"
#include "hprr/reward.hpp"

namespace hprr::analyze {

struct SystemSummary {
  std::string system;
  std::size_t n = 0;
  std::array<double, kMetricCount> mean{};
  std::array<double, kMetricCount> sem{};  // sample stddev / sqrt(n); 0 when n == 1
  bool sem_undefined = false;              // set when n == 1
  double reward_uniform = 0.0;             // recomputed from vectors
  double reward_human = 0.0;
  std::size_t stored_reward_mismatches = 0;  // stored totals off by more than 0.005
};

/// Per-system means and SEMs, in order of first appearance. Reward means are
/// recomputed from the metric vectors; stored totals are only compared.
std::vector<SystemSummary> summarize(const std::vector<reward::ScoredReview>& scored);

struct NormalizedProfile {
  std::string system;
  double normalized_mean = 0.0;  // mean over kept metrics of the min-max normalized system means
  double variance = 0.0;         // population variance of the same values
  std::array<std::optional<double>, kMetricCount> normalized{};
};

struct ProfileReport {
  std::vector<NormalizedProfile> profiles;
  std::vector<std::string> dropped_metrics;  // constant across systems
};

/// Min-max normalizes each metric's mean across systems. Needs >= 2 systems.
ProfileReport normalized_profile(const std::vector<SystemSummary>& summaries);

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t count = 0;
};

/// Uniform-reward histogram for one system. Bins are [low, high) except the
/// last, which is closed. Without an explicit range the system's min and max
/// are used; values outside an explicit range are not counted.
std::vector<HistogramBin> reward_histogram(const std::vector<reward::ScoredReview>& scored,
                                           const std::string& system, std::size_t bins,
                                           std::optional<std::pair<double, double>> range = {});

/// Table-shaped CSV: system, n, nine metric means, Reward (U), Reward (H), then SEMs.
std::string summary_csv(const std::vector<SystemSummary>& summaries);
std::string profile_csv(const ProfileReport& report);
std::string histogram_csv(const std::vector<HistogramBin>& bins);

}  // namespace hprr::analyze
