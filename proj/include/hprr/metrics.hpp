#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace hprr {

inline constexpr std::size_t kAspectCount = 8;
inline constexpr std::size_t kMetricCount = 9;

/// Canonical metric order: the eight aspects followed by METEOR relevance.
enum class Metric : std::size_t {
  Criticism = 0,
  Example,
  ImportanceRelevance,
  MaterialsMethods,
  Praise,
  PresentationReporting,
  ResultsDiscussion,
  SuggestionSolution,
  Relevance,
};

inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "Cr", "Ex", "ImRe", "MaMe", "Pr", "PrRe", "ReDi", "SuSo", "ReME"};

constexpr std::size_t index(Metric m) noexcept { return static_cast<std::size_t>(m); }
constexpr std::string_view short_name(Metric m) noexcept { return kMetricNames[index(m)]; }

/// Looks up a metric by its short name ("Cr", ..., "ReME").
std::optional<Metric> metric_from_name(std::string_view name);

/// Per-review aspect scores; each component is a sentence-normalized fraction.
struct AspectVector {
  std::array<double, kAspectCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const AspectVector&) const = default;
};

/// The nine reward dimensions of one review, all in [0, 1].
struct MetricVector {
  std::array<double, kMetricCount> values{};

  MetricVector() = default;
  explicit MetricVector(const std::array<double, kMetricCount>& v) : values(v) {}
  MetricVector(const AspectVector& aspects, double relevance);

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](Metric m) const { return values[index(m)]; }
  bool operator==(const MetricVector&) const = default;

  /// Throws ValidationError when a component is non-finite or outside [0, 1].
  void validate() const;
};

enum class WeightTag { Uniform, HumanAligned, Custom };

std::string_view to_string(WeightTag tag);

/// Nine non-negative weights in canonical metric order.
struct WeightVector {
  std::array<double, kMetricCount> values{};
  WeightTag tag = WeightTag::Custom;

  double operator[](std::size_t i) const { return values[i]; }
  double sum() const;
  void validate() const;
};

// {"Cr": x, ..., "ReME": y}. Every key is required, unknown keys are rejected.
nlohmann::json to_json_object(const std::array<double, kMetricCount>& v);
std::array<double, kMetricCount> metrics_from_json_object(const nlohmann::json& j);

}  // namespace hprr
