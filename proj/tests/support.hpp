#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hprr/metrics.hpp"
#include "hprr/prefit.hpp"
#include "hprr/reward.hpp"

namespace support {

inline std::string fixture(const std::string& name) { return std::string(HPRR_FIXTURES) + "/" + name; }

struct TableRow {
  std::string system;
  hprr::MetricVector metrics;
  double reward_u = 0.0;
  double reward_h = 0.0;
};

inline std::vector<TableRow> load_table(const std::string& name) {
  std::ifstream in(fixture(name));
  std::vector<TableRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    TableRow r;
    r.system = j.at("system").get<std::string>();
    r.metrics = hprr::MetricVector(hprr::metrics_from_json_object(j.at("metrics")));
    r.reward_u = j.at("expected_reward_u").get<double>();
    r.reward_h = j.at("expected_reward_h").get<double>();
    rows.push_back(r);
  }
  return rows;
}

// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("hprr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline hprr::MetricVector random_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hprr::MetricVector v;
  for (auto& x : v.values) x = u(rng);
  return v;
}

// Matches labelled by a known linear score; `tie_noise` of them relabelled as ties.
inline std::vector<hprr::prefit::PreferenceMatch> planted_matches(
    const hprr::prefit::Weights& w, std::size_t n, double tie_noise, std::mt19937_64& rng) {
  using hprr::prefit::Outcome;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<hprr::prefit::PreferenceMatch> out;
  for (std::size_t i = 0; i < n; ++i) {
    hprr::prefit::PreferenceMatch m;
    m.paper_id = "p" + std::to_string(i);
    m.a = random_vector(rng);
    m.b = random_vector(rng);
    double s = 0.0;
    for (std::size_t k = 0; k < hprr::kMetricCount; ++k) s += w[k] * (m.a[k] - m.b[k]);
    m.outcome = s > 0 ? Outcome::ABetter : Outcome::BBetter;
    if (u(rng) < tie_noise) m.outcome = Outcome::Tie;
    out.push_back(m);
  }
  return out;
}

}  // namespace support
