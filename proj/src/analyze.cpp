#include "hprr/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hprr/error.hpp"
#include "hprr/simd/kernels.hpp"

namespace hprr::analyze {

std::vector<SystemSummary> summarize(const std::vector<reward::ScoredReview>& scored) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const reward::ScoredReview*>> groups;
  for (const auto& r : scored) {
    if (r.system.empty()) throw ValidationError("scored review '" + r.id + "' has no system label");
    auto [it, inserted] = groups.try_emplace(r.system);
    if (inserted) order.push_back(r.system);
    it->second.push_back(&r);
  }

  const auto uniform = reward::uniform_weights();
  const auto human = reward::human_aligned_weights();
  std::vector<SystemSummary> out;
  for (const auto& system : order) {
    const auto& members = groups.at(system);
    SystemSummary s;
    s.system = system;
    s.n = members.size();
    const double n = static_cast<double>(s.n);

    // Column sums via A^T 1 over the n x 9 block.
    std::vector<double> block;
    block.reserve(members.size() * kMetricCount);
    for (const auto* r : members) block.insert(block.end(), r->metrics.values.begin(), r->metrics.values.end());
    const std::vector<double> ones(members.size(), 1.0);
    simd::gemv_t(block, members.size(), kMetricCount, ones, s.mean);
    for (double& m : s.mean) m /= n;

    if (s.n == 1) {
      s.sem_undefined = true;
    } else {
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        double ss = 0.0;
        for (const auto* r : members) {
          const double dev = r->metrics[k] - s.mean[k];
          ss += dev * dev;
        }
        s.sem[k] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      }
    }
    const MetricVector mean_vector(s.mean);
    s.reward_uniform = reward::hprr(mean_vector, uniform);
    s.reward_human = reward::hprr(mean_vector, human);
    for (const auto* r : members) {
      const double u = reward::hprr(r->metrics, uniform);
      const double h = reward::hprr(r->metrics, human);
      if (std::abs(u - r->reward_uniform) > 0.005 || std::abs(h - r->reward_human) > 0.005) {
        ++s.stored_reward_mismatches;
      }
    }
    out.push_back(s);
  }
  return out;
}

ProfileReport normalized_profile(const std::vector<SystemSummary>& summaries) {
  if (summaries.size() < 2) throw ValidationError("normalized profile needs at least two systems");
  ProfileReport report;
  report.profiles.resize(summaries.size());
  for (std::size_t s = 0; s < summaries.size(); ++s) report.profiles[s].system = summaries[s].system;

  for (std::size_t k = 0; k < kMetricCount; ++k) {
    double lo = summaries[0].mean[k], hi = lo;
    for (const auto& s : summaries) {
      lo = std::min(lo, s.mean[k]);
      hi = std::max(hi, s.mean[k]);
    }
    if (!(hi > lo)) {
      report.dropped_metrics.emplace_back(kMetricNames[k]);
      continue;
    }
    for (std::size_t s = 0; s < summaries.size(); ++s) {
      report.profiles[s].normalized[k] = (summaries[s].mean[k] - lo) / (hi - lo);
    }
  }
  for (auto& p : report.profiles) {
    double sum = 0.0;
    std::size_t kept = 0;
    for (const auto& v : p.normalized) {
      if (v) {
        sum += *v;
        ++kept;
      }
    }
    if (kept == 0) continue;
    p.normalized_mean = sum / static_cast<double>(kept);
    double ss = 0.0;
    for (const auto& v : p.normalized) {
      if (v) ss += (*v - p.normalized_mean) * (*v - p.normalized_mean);
    }
    p.variance = ss / static_cast<double>(kept);
  }
  return report;
}

std::vector<HistogramBin> reward_histogram(const std::vector<reward::ScoredReview>& scored,
                                           const std::string& system, std::size_t bins,
                                           std::optional<std::pair<double, double>> range) {
  if (bins < 2) throw ValidationError("histogram needs at least two bins");
  std::vector<double> values;
  const auto uniform = reward::uniform_weights();
  for (const auto& r : scored) {
    if (r.system == system) values.push_back(reward::hprr(r.metrics, uniform));
  }
  double lo = 0.0, hi = 0.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(hi > lo)) throw ValidationError("histogram range must have high > low");
  } else if (!values.empty()) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
  }
  if (!(hi > lo)) hi = lo + 1.0;  // all values equal: one unit-wide span

  std::vector<HistogramBin> out(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].low = lo + width * static_cast<double>(b);
    out[b].high = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : values) {
    if (v < lo || v > hi) continue;
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++out[b].count;
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string summary_csv(const std::vector<SystemSummary>& summaries) {
  std::ostringstream os;
  os << "system,n";
  for (auto name : kMetricNames) os << ',' << name;
  os << ",reward_u,reward_h";
  for (auto name : kMetricNames) os << ",sem_" << name;
  os << ",sem_undefined,stored_reward_mismatches\n";
  for (const auto& s : summaries) {
    os << s.system << ',' << s.n;
    for (double m : s.mean) os << ',' << fmt(m);
    os << ',' << fmt(s.reward_uniform) << ',' << fmt(s.reward_human);
    for (double e : s.sem) os << ',' << fmt(e);
    os << ',' << (s.sem_undefined ? 1 : 0) << ',' << s.stored_reward_mismatches << '\n';
  }
  return os.str();
}

std::string profile_csv(const ProfileReport& report) {
  std::ostringstream os;
  os << "system,mean_over_metric_means,variance_over_metric_means";
  for (auto name : kMetricNames) os << ',' << name;
  os << '\n';
  for (const auto& p : report.profiles) {
    os << p.system << ',' << fmt(p.normalized_mean) << ',' << fmt(p.variance);
    for (const auto& v : p.normalized) os << ',' << (v ? fmt(*v) : std::string());
    os << '\n';
  }
  return os.str();
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os << "bin_low,bin_high,count\n";
  for (const auto& b : bins) os << fmt(b.low) << ',' << fmt(b.high) << ',' << b.count << '\n';
  return os.str();
}

}  // namespace hprr::analyze
