#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hprr/error.hpp"
#include "hprr/nnls.hpp"
#include "hprr/prefit.hpp"
#include "oracles/logistic_oracle.hpp"
#include "oracles/nnls_oracle.hpp"
#include "support.hpp"

using namespace hprr;
using namespace hprr::prefit;

namespace {

double sum(const Weights& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

std::size_t argmax(const Weights& w) {
  return static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
}

PreferenceMatch match(const std::array<double, 9>& a, const std::array<double, 9>& b, Outcome o) {
  PreferenceMatch m;
  m.paper_id = "p";
  m.a = MetricVector(a);
  m.b = MetricVector(b);
  m.outcome = o;
  return m;
}

// a - b == d with both sides inside [0, 1].
PreferenceMatch from_difference(const std::array<double, 9>& d, Outcome o) {
  std::array<double, 9> a{}, b{};
  for (int k = 0; k < 9; ++k) {
    a[k] = 0.5 + d[k] / 2;
    b[k] = 0.5 - d[k] / 2;
  }
  return match(a, b, o);
}

void check_near(const Weights& got, const Weights& expected, double tol) {
  for (std::size_t k = 0; k < 9; ++k) {
    CAPTURE(k);
    CHECK(std::abs(got[k] - expected[k]) <= tol);
  }
}

}  // namespace

TEST_CASE("min-max scaling maps unadjusted rows to positive rows") {
  // Inputs and outputs are printed to two decimals, so agreement is to rounding.
  check_near(min_max_to_nine({-0.20, -0.74, -0.14, 0.22, -0.11, 0.05, -0.05, 0.54, 1.21}),
             {0.66, 0.00, 0.73, 1.16, 0.77, 0.95, 0.83, 1.54, 2.35}, 0.01);
  check_near(min_max_to_nine({0, 0, 0.23, 0, 0, 0, 0, 0.33, 19.09}),
             {0, 0, 0.10, 0, 0, 0, 0, 0.15, 8.74}, 0.01);
  check_near(min_max_to_nine({0.79, 0.38, 0.26, 0.05, 0.06, -0.24, 0.15, 0.30, 2.27}),
             {1.50, 0.91, 0.73, 0.42, 0.43, 0.00, 0.57, 0.79, 3.65}, 0.01);
  check_near(min_max_to_nine({0.49, 0.27, 0.20, 0.02, 0.03, -0.16, 0.05, 0.22, 1.55}),
             {1.42, 0.94, 0.80, 0.40, 0.42, 0.00, 0.46, 0.83, 3.73}, 0.02);
}

TEST_CASE("adjust_weights on the reported row") {
  const Weights raw = {0, 0, 0.10, 0, 0, 0, 0, 0.15, 8.74};
  const Weights expected = {0.01, 0.01, 0.11, 0.01, 0.01, 0.01, 0.01, 0.16, 8.67};
  const auto got = adjust_weights(raw, 0.01);
  check_near(got, expected, 0.005);
  CHECK(sum(got) >= 8.98);
  CHECK(sum(got) <= 9.02);
  CHECK(got[0] == doctest::Approx(0.01 * 9.0 / (9.0 + 0.09)).epsilon(1e-9));
}

TEST_CASE("adjusting an already adjusted row changes it only by rounding") {
  const Weights row = {0.01, 0.01, 0.11, 0.01, 0.01, 0.01, 0.01, 0.16, 8.67};
  check_near(adjust_weights(row), row, 0.01);
}

TEST_CASE("degenerate min-max") {
  Weights ones;
  ones.fill(1.0);
  CHECK_THROWS_AS(min_max_to_nine(ones), Error);
  CHECK_THROWS_AS(adjust_weights(ones), Error);
}

TEST_CASE("adjust_weights bounds and scale invariance under fuzz") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 3.0);
  std::uniform_real_distribution<double> k(0.01, 100.0);
  for (int trial = 0; trial < 5000; ++trial) {
    Weights raw;
    for (auto& x : raw) x = n(rng);
    const auto out = adjust_weights(raw);
    CHECK(*std::min_element(out.begin(), out.end()) >= 0.0099);
    CHECK(std::abs(sum(out) - 9.0) <= 0.02);
    Weights scaled = raw;
    const double factor = k(rng);
    for (auto& x : scaled) x *= factor;
    const auto again = adjust_weights(scaled);
    for (std::size_t i = 0; i < 9; ++i) CHECK(again[i] == doctest::Approx(out[i]).epsilon(1e-9));
  }
}

TEST_CASE("laplace smoothing") {
  const Weights w = {9, 0, 0, 0, 0, 0, 0, 0, 0};
  const auto s = laplace_smooth(w, 0.01);
  CHECK(sum(s) == doctest::Approx(9.0));
  CHECK(s[1] > 0.0);
  CHECK(s[0] == doctest::Approx(9.01 * 9.0 / 9.09));
}

TEST_CASE("bradley-terry matches a gradient-descent logistic fit") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Weights w;
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto& x : w) x = n(rng);
    auto matches = support::planted_matches(w, 60 + 20 * trial, 0.15, rng);
    // Flip some outcomes so the data are not separable.
    for (std::size_t i = 0; i < matches.size(); i += 7) {
      if (matches[i].outcome == Outcome::ABetter) matches[i].outcome = Outcome::BBetter;
    }
    const auto fit = fit_bt(matches);
    const auto expected = oracle::logistic_gd(matches);
    CAPTURE(trial);
    check_near(fit.raw, expected, 1e-6);
  }
}

TEST_CASE("bradley-terry on axis-aligned wins puts its largest weight there") {
  for (std::size_t axis = 0; axis < 9; ++axis) {
    std::vector<PreferenceMatch> matches;
    std::mt19937_64 rng(axis);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int i = 0; i < 40; ++i) {
      std::array<double, 9> d{};
      d[axis] = (i % 2 == 0 ? 1.0 : -1.0) * u(rng);
      matches.push_back(from_difference(d, d[axis] > 0 ? Outcome::ABetter : Outcome::BBetter));
    }
    const auto fit = fit_bt(matches);
    CHECK(argmax(fit.raw) == axis);
    CHECK(fit.raw[axis] > 0.0);
  }
}

TEST_CASE("bradley-terry weights may be negative") {
  std::mt19937_64 rng(9);
  Weights w{};
  w[0] = -4.0;
  w[8] = 4.0;
  const auto fit = fit_bt(support::planted_matches(w, 300, 0.0, rng));
  CHECK(fit.raw[0] < 0.0);
  CHECK(fit.raw[8] > 0.0);
  CHECK(*std::min_element(fit.positive.begin(), fit.positive.end()) >= 0.0);
}

TEST_CASE("bradley-terry needs a decisive match") {
  std::vector<PreferenceMatch> ties(5, match({}, {}, Outcome::Tie));
  CHECK_THROWS_AS(fit_bt(ties), Error);
}

TEST_CASE("adapted bradley-terry is non-negative least squares on signed outcomes") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    Weights w;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& x : w) x = u(rng);
    const auto matches = support::planted_matches(w, 50 + trial * 5, 0.1, rng);
    const auto fit = fit_abt(matches);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(matches.size()), 9);
    Eigen::VectorXd y(static_cast<Eigen::Index>(matches.size()));
    for (std::size_t i = 0; i < matches.size(); ++i) {
      const auto d = matches[i].difference();
      for (int k = 0; k < 9; ++k) a(static_cast<Eigen::Index>(i), k) = d[k];
      y[static_cast<Eigen::Index>(i)] = matches[i].outcome == Outcome::ABetter ? 1.0
                                        : matches[i].outcome == Outcome::BBetter ? -1.0
                                                                                 : 0.0;
    }
    const Eigen::VectorXd expected = oracle::nnls_enumerate(a, y);
    CAPTURE(trial);
    for (int k = 0; k < 9; ++k) {
      CHECK(fit.raw[k] >= 0.0);
      CHECK(std::abs(fit.raw[k] - expected[k]) <= 1e-7);
    }
  }
}

TEST_CASE("adapted bradley-terry puts mass on a dimension that drives outcomes") {
  std::vector<PreferenceMatch> matches;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    std::array<double, 9> d;
    for (auto& x : d) x = u(rng) * 0.3;
    d[8] = u(rng);
    matches.push_back(from_difference(d, d[8] > 0.1 ? Outcome::ABetter
                                         : d[8] < -0.1 ? Outcome::BBetter
                                                       : Outcome::Tie));
  }
  const auto fit = fit_abt(matches);
  CHECK(argmax(fit.raw) == 8);
  CHECK(argmax(fit.smoothed) == 8);
  CHECK(fit.smoothed[8] > 5.0);
}

TEST_CASE("adapted bradley-terry edge cases") {
  SUBCASE("all ties give the zero vector") {
    std::mt19937_64 rng(3);
    std::vector<PreferenceMatch> matches;
    for (int i = 0; i < 10; ++i) {
      auto m = match(support::random_vector(rng).values, support::random_vector(rng).values, Outcome::Tie);
      matches.push_back(m);
    }
    const auto fit = fit_abt(matches);
    for (double x : fit.raw) CHECK(x == 0.0);
    CHECK_FALSE(fit.warnings.empty());
  }
  SUBCASE("one decisive match gives the minimum-norm solution") {
    const std::array<double, 9> d = {0.5, -0.25, 0.25, 0, 0, 0, 0, 0, 0};
    const auto fit = fit_abt({from_difference(d, Outcome::ABetter)});
    // min |x| s.t. d.x = 1, x >= 0  ->  x = d+ / |d+|^2
    const double norm2 = 0.5 * 0.5 + 0.25 * 0.25;
    CHECK(fit.raw[0] == doctest::Approx(0.5 / norm2).epsilon(1e-6));
    CHECK(fit.raw[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.raw[2] == doctest::Approx(0.25 / norm2).epsilon(1e-6));
  }
  SUBCASE("identical covariates everywhere") {
    CHECK_THROWS_AS(fit_abt({match({}, {}, Outcome::ABetter)}), Error);
  }
}

TEST_CASE("constrained fit on a single axis-aligned win") {
  std::array<double, 9> d{};
  d[0] = 1.0;
  FitOptions opt;
  opt.crm.slack_mode = SlackMode::Hard;
  const auto fit = fit_crm({from_difference(d, Outcome::ABetter)}, opt);
  CHECK(fit.raw[0] == doctest::Approx(1e-12).epsilon(1e-6));
  for (std::size_t k = 1; k < 9; ++k) CHECK(fit.raw[k] == 0.0);
}

TEST_CASE("constrained fit with a tie binds weights to the null space") {
  FitOptions opt;
  opt.crm.slack_mode = SlackMode::Hard;
  opt.crm.epsilon = 0.01;
  std::array<double, 9> tie{}, win{};
  tie[0] = 1.0;
  tie[1] = -1.0;
  win[0] = 1.0;
  win[1] = 1.0;
  const auto fit = fit_crm({from_difference(tie, Outcome::Tie), from_difference(win, Outcome::ABetter)}, opt);
  CHECK(fit.raw[0] == doctest::Approx(0.005));
  CHECK(fit.raw[1] == doctest::Approx(0.005));
}

TEST_CASE("contradictory matches") {
  std::array<double, 9> d{};
  d[2] = 0.5;
  const std::vector<PreferenceMatch> matches = {from_difference(d, Outcome::ABetter),
                                                from_difference(d, Outcome::BBetter)};
  FitOptions hard;
  hard.crm.slack_mode = SlackMode::Hard;
  try {
    fit_crm(matches, hard);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.conflicts() >= 1);
  }
  const auto soft = fit_crm(matches);
  CHECK(soft.violations >= 1);
  CHECK_FALSE(soft.warnings.empty());
}

TEST_CASE("hard-mode constraints replay on planted data") {
  std::mt19937_64 rng(8);
  FitOptions opt;
  opt.crm.slack_mode = SlackMode::Hard;
  opt.crm.epsilon = 1e-3;
  for (int trial = 0; trial < 20; ++trial) {
    Weights w;
    std::uniform_real_distribution<double> u(0.0, 0.1);
    for (auto& x : w) x = u(rng);
    auto matches = support::planted_matches(w, 30, 0.0, rng);
    // Keep only matches the planted weights satisfy with the margin.
    std::erase_if(matches, [&](const PreferenceMatch& m) {
      double s = 0.0;
      const auto d = m.difference();
      for (int k = 0; k < 9; ++k) s += w[k] * d[k];
      return std::abs(s) < opt.crm.epsilon;
    });
    const auto fit = fit_crm(matches, opt);
    CHECK(sum(fit.raw) <= sum(w) + 1e-9);
    for (const auto& m : matches) {
      double s = 0.0;
      const auto d = m.difference();
      for (int k = 0; k < 9; ++k) s += fit.raw[k] * d[k];
      if (m.outcome == Outcome::ABetter) CHECK(s >= opt.crm.epsilon - 1e-9);
      if (m.outcome == Outcome::BBetter) CHECK(s <= -opt.crm.epsilon + 1e-9);
    }
  }
}

TEST_CASE("positive weights are non-negative for every estimator") {
  std::mt19937_64 rng(10);
  Weights w;
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& x : w) x = std::abs(n(rng));
  const auto matches = support::planted_matches(w, 120, 0.1, rng);
  for (auto e : {Estimator::BradleyTerry, Estimator::AdaptedBradleyTerry, Estimator::ConstrainedReward}) {
    const auto fit = prefit::fit(matches, e);
    CAPTURE(to_string(e));
    for (std::size_t k = 0; k < 9; ++k) {
      CHECK(fit.positive[k] >= 0.0);
      CHECK(fit.smoothed[k] > 0.0);
    }
    CHECK(sum(fit.positive) == doctest::Approx(9.0));
    CHECK(sum(fit.smoothed) == doctest::Approx(9.0));
  }
}

TEST_CASE("predictions do not depend on weight scale") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_real_distribution<double> k(0.001, 1000.0);
  for (int trial = 0; trial < 2000; ++trial) {
    Weights w;
    for (auto& x : w) x = u(rng);
    const auto m = match(support::random_vector(rng).values, support::random_vector(rng).values, Outcome::Tie);
    Weights scaled = w;
    const double factor = k(rng);
    for (auto& x : scaled) x *= factor;
    CHECK(predict(w, m, 0.02) == predict(scaled, m, 0.02));
  }
}

TEST_CASE("preference records") {
  const nlohmann::json j = {{"paper_id", "p1"},
                            {"reviewer_id", "r9"},
                            {"covariates_a", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}},
                            {"covariates_b", {0, 0, 0, 0, 0, 0, 0, 0, 0}},
                            {"outcome", "A"}};
  const auto m = match_from_json(j);
  CHECK(m.outcome == Outcome::ABetter);
  CHECK(m.a[8] == 0.9);
  const auto back = match_from_json(to_json(m));
  CHECK(back.a == m.a);
  CHECK(back.outcome == m.outcome);
  CHECK(outcome_from_string("TIE") == Outcome::Tie);
  CHECK_FALSE(outcome_from_string("draw").has_value());

  auto bad = j;
  bad["outcome"] = "draw";
  CHECK_THROWS_AS(match_from_json(bad), ValidationError);
  bad = j;
  bad["covariates_a"] = {1, 2};
  CHECK_THROWS_AS(match_from_json(bad), ValidationError);

  support::TempDir dir;
  support::write_text(dir.file("prefs.jsonl"), j.dump() + "\n" + "{\"paper_id\": 1}\n");
  try {
    load_preferences(dir.file("prefs.jsonl"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("fit result JSON") {
  std::mt19937_64 rng(15);
  Weights w{};
  w[3] = 1.0;
  const auto fit = fit_crm(support::planted_matches(w, 20, 0.0, rng));
  const auto j = to_json(fit);
  CHECK(j.at("estimator") == "crm");
  CHECK(j.at("f1_average") == "macro");
  CHECK(j.at("cv_f1").is_null());
  CHECK(j.contains("violations"));
  CHECK(metrics_from_json_object(j.at("smoothed_weights")) == fit.smoothed);
}
