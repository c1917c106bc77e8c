#include "hprr/metrics.hpp"

#include <cmath>
#include <numeric>

#include "hprr/error.hpp"

namespace hprr {

std::optional<Metric> metric_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kMetricNames[i] == name) return static_cast<Metric>(i);
  }
  return std::nullopt;
}

MetricVector::MetricVector(const AspectVector& aspects, double relevance) {
  for (std::size_t i = 0; i < kAspectCount; ++i) values[i] = aspects[i];
  values[index(Metric::Relevance)] = relevance;
}

void MetricVector::validate() const {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError("metric " + std::string(kMetricNames[i]) + " = " + std::to_string(v) +
                            " outside [0, 1]");
    }
  }
}

std::string_view to_string(WeightTag tag) {
  switch (tag) {
    case WeightTag::Uniform: return "uniform";
    case WeightTag::HumanAligned: return "human_aligned";
    case WeightTag::Custom: return "custom";
  }
  return "custom";
}

double WeightVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

void WeightVector::validate() const {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw ValidationError("weight " + std::string(kMetricNames[i]) + " must be a non-negative number");
    }
  }
}

nlohmann::json to_json_object(const std::array<double, kMetricCount>& v) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kMetricCount; ++i) j[std::string(kMetricNames[i])] = v[i];
  return j;
}

std::array<double, kMetricCount> metrics_from_json_object(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("expected an object keyed by metric short name");
  std::array<double, kMetricCount> out{};
  for (const auto& [key, value] : j.items()) {
    if (!metric_from_name(key)) throw ValidationError("unknown metric '" + key + "'");
    if (!value.is_number()) throw ValidationError("metric '" + key + "' is not a number");
  }
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const std::string key(kMetricNames[i]);
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError("missing metric '" + key + "'");
    out[i] = it->get<double>();
  }
  return out;
}

}  // namespace hprr
