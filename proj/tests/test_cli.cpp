#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "hprr/prefit.hpp"
#include "hprr/reward.hpp"
#include "support.hpp"

using nlohmann::json;
using hprr::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> read_jsonl(const std::string& path) {
  std::vector<json> rows;
  std::istringstream in(support::read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(json::parse(line));
  }
  return rows;
}

json corpus_record(int i, const std::string& paper = "We evaluate the model on two benchmarks and report results.") {
  return {{"review_id", "r" + std::to_string(i)},
          {"paper_id", "p" + std::to_string(i % 4)},
          {"paper_text", paper},
          {"review_text", i % 2 == 0 ? "The model is novel. There is a lack of baselines. I suggest adding one."
                                     : "The paper is well written. Results on the benchmark are strong."},
          {"system", i % 2 == 0 ? "alpha" : "beta"}};
}

void write_corpus(const std::string& path, int n, bool blank_paper_first = false) {
  std::string body;
  for (int i = 0; i < n; ++i) {
    body += (blank_paper_first && i == 0 ? corpus_record(i, "") : corpus_record(i)).dump() + "\n";
  }
  support::write_text(path, body);
}

void write_preferences(const std::string& path, bool contradictory) {
  std::mt19937_64 rng(5);
  hprr::prefit::Weights w{};
  w[2] = 1.0;
  w[8] = 2.0;
  auto matches = support::planted_matches(w, 60, 0.1, rng);
  if (contradictory) {
    auto flipped = matches[0];
    flipped.outcome = matches[0].outcome == hprr::prefit::Outcome::ABetter ? hprr::prefit::Outcome::BBetter
                                                                           : hprr::prefit::Outcome::ABetter;
    matches.push_back(flipped);
  }
  std::string body;
  for (const auto& m : matches) body += hprr::prefit::to_json(m).dump() + "\n";
  support::write_text(path, body);
}

}  // namespace

TEST_CASE("score writes one record per review after a seeded header") {
  support::TempDir dir;
  write_corpus(dir.file("c.jsonl"), 3, true);
  const auto r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("s.jsonl")});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const auto rows = read_jsonl(dir.file("s.jsonl"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].at("_header").at("seed") == 42);
  CHECK(rows[1].at("id") == "r0");
  CHECK(rows[1].at("metrics").at("ReME") == 0.0);  // blank manuscript
  CHECK(rows[2].at("metrics").at("ReME").get<double>() > 0.0);
  CHECK(json::parse(r.out).at("warnings") == 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].at("reward").get<double>() == doctest::Approx(rows[i].at("reward_uniform").get<double>()));
  }
}

TEST_CASE("score is byte-identical across reruns and worker counts") {
  support::TempDir dir;
  write_corpus(dir.file("c.jsonl"), 25);
  REQUIRE(run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("a.jsonl")}).code == 0);
  REQUIRE(run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("b.jsonl"), "--workers", "4"}).code == 0);
  CHECK(support::read_text(dir.file("a.jsonl")) == support::read_text(dir.file("b.jsonl")));
}

TEST_CASE("score reports record errors with a machine-readable summary") {
  support::TempDir dir;
  std::string body;
  for (int i = 0; i < 150; ++i) body += corpus_record(i).dump() + "\n";
  body += json{{"paper_id", "p"}, {"review_text", "Short but fine."}}.dump() + "\n";
  body += json{{"paper_id", "p"}}.dump() + "\n";
  support::write_text(dir.file("c.jsonl"), body);
  const auto r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("s.jsonl")});
  CHECK(r.code == 1);
  const auto summary = json::parse(r.err);
  CHECK(summary.at("command") == "score");
  CHECK(summary.at("error_count") == 1);
  CHECK(summary.at("errors")[0].at("line") == 152);
  CHECK(read_jsonl(dir.file("s.jsonl")).size() == 152);
}

TEST_CASE("paths are validated before any work") {
  support::TempDir dir;
  auto r = run({"score", "--input", dir.file("missing.jsonl"), "--output", dir.file("s.jsonl")});
  CHECK(r.code == 1);
  CHECK(json::parse(r.err).at("error_count") == 1);
  write_corpus(dir.file("c.jsonl"), 2);
  r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("no/such/dir/s.jsonl")});
  CHECK(r.code == 1);
  r = run({"score", "--input", dir.file("c.jsonl")});
  CHECK(r.code == 1);
}

TEST_CASE("usage errors") {
  auto r = run({"frobnicate"});
  CHECK(r.code == 2);
  r = run({});
  CHECK(r.code == 2);
  r = run({"fit", "--crm-mode", "medium"});
  CHECK(r.code == 2);
  r = run({"--help"});
  CHECK(r.code == 0);
}

TEST_CASE("fit runs every estimator and isolates failures") {
  support::TempDir dir;
  write_preferences(dir.file("p.jsonl"), false);
  auto r = run({"fit", "--input", dir.file("p.jsonl"), "--output", dir.file("f.jsonl"), "--weights-out",
                dir.file("w.json"), "--seed", "7"});
  CHECK(r.code == 0);
  auto rows = read_jsonl(dir.file("f.jsonl"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].at("_header").at("seed") == 7);
  CHECK(rows[1].at("estimator") == "bt");
  CHECK(rows[2].at("estimator") == "abt");
  CHECK(rows[3].at("estimator") == "crm");
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(rows[i].at("fold_f1").size() == 5);
    CHECK(rows[i].at("cv_f1").is_number());
    CHECK(rows[i].at("seed") == 7);
  }

  // Exported weights load as a custom preset.
  write_corpus(dir.file("c.jsonl"), 3);
  r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("s.jsonl"), "--weights", dir.file("w.json")});
  CHECK(r.code == 0);
  const auto w = hprr::reward::load_weights(dir.file("w.json"));
  CHECK(w.values == hprr::metrics_from_json_object(rows[1].at("smoothed_weights")));
  const auto scored = read_jsonl(dir.file("s.jsonl"));
  CHECK(scored[0].at("_header").at("weights") == "custom");
  const auto v = hprr::MetricVector(hprr::metrics_from_json_object(scored[1].at("metrics")));
  CHECK(scored[1].at("reward").get<double>() == doctest::Approx(hprr::reward::hprr(v, w)));

  write_preferences(dir.file("bad.jsonl"), true);
  r = run({"fit", "--input", dir.file("bad.jsonl"), "--output", dir.file("g.jsonl"), "--crm-mode", "hard",
           "--estimators", "abt,crm"});
  CHECK(r.code == 1);
  rows = read_jsonl(dir.file("g.jsonl"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].at("estimator") == "abt");
  CHECK_FALSE(rows[1].contains("error"));
  CHECK(rows[2].at("estimator") == "crm");
  CHECK(rows[2].contains("error"));
  CHECK(rows[2].at("conflicts").get<int>() >= 1);
  const auto summary = json::parse(r.err);
  CHECK(summary.at("errors")[0].at("estimator") == "crm");

  r = run({"fit", "--input", dir.file("bad.jsonl"), "--output", dir.file("h.jsonl"), "--estimators", "crm"});
  CHECK(r.code == 0);
  CHECK(read_jsonl(dir.file("h.jsonl"))[1].at("violations").get<int>() >= 1);

  r = run({"fit", "--input", dir.file("p.jsonl"), "--output", dir.file("x.jsonl"), "--estimators", "svm"});
  CHECK(r.code == 1);
}

TEST_CASE("curate reports kept ids") {
  support::TempDir dir;
  write_corpus(dir.file("c.jsonl"), 20);
  const auto r = run({"curate", "--input", dir.file("c.jsonl"), "--output", dir.file("k.jsonl"), "--kept-output",
                      dir.file("kept.jsonl")});
  CHECK(r.code == 0);
  const auto rows = read_jsonl(dir.file("k.jsonl"));
  REQUIRE(rows.size() == 2);
  const auto report = rows[1];
  CHECK(report.at("input_count") == 20);
  CHECK(report.at("percentile") == "nearest-rank");
  const auto kept = read_jsonl(dir.file("kept.jsonl"));
  CHECK(kept.size() == report.at("kept_ids").size() + 1);

  write_corpus(dir.file("small.jsonl"), 5);
  CHECK(run({"curate", "--input", dir.file("small.jsonl"), "--output", dir.file("x.jsonl")}).code == 1);
}

TEST_CASE("export-sft writes template-prefixed rows") {
  support::TempDir dir;
  auto rec = corpus_record(0);
  rec["thinking_trace"] = "First I read the abstract.";
  support::write_text(dir.file("c.jsonl"), rec.dump() + "\n" + corpus_record(1).dump() + "\n");
  const auto r = run({"export-sft", "--input", dir.file("c.jsonl"), "--output", dir.file("sft.jsonl")});
  CHECK(r.code == 0);
  const auto rows = read_jsonl(dir.file("sft.jsonl"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("user").get<std::string>().rfind(
            "You are a member of the scientific community tasked with peer review.", 0) == 0);
  CHECK(rows[0].at("assistant").get<std::string>() ==
        "<think> First I read the abstract. </think>\n\n" + rec.at("review_text").get<std::string>());
  CHECK(rows[1].at("assistant") == corpus_record(1).at("review_text"));
}

TEST_CASE("analyze on the training-treatment table matches the golden CSV") {
  support::TempDir dir;
  const auto r = run({"analyze", "--input", support::fixture("training_treatments.jsonl"), "--output", dir.file("sum.csv"),
                      "--profile-output", dir.file("prof.csv"), "--histogram-output", dir.file("hist.csv"),
                      "--system", "RL-uniform", "--bins", "4", "--range", "0,4"});
  CHECK(r.code == 0);
  CHECK(support::read_text(dir.file("sum.csv")) == support::read_text(support::fixture("training_treatments_summary.csv")));
  const auto prof = support::read_text(dir.file("prof.csv"));
  CHECK(prof.find("system,mean_over_metric_means,variance_over_metric_means") != std::string::npos);
  const auto hist = support::read_text(dir.file("hist.csv"));
  CHECK(hist.find("3.000000,4.000000,1\n") != std::string::npos);

  CHECK(run({"analyze", "--input", support::fixture("training_treatments.jsonl"), "--output", dir.file("x.csv"),
             "--histogram-output", dir.file("h.csv")}).code == 1);
}

TEST_CASE("analyze flags records without a system") {
  support::TempDir dir;
  support::write_text(dir.file("s.jsonl"), json{{"id", "x"}, {"metrics", json::parse(R"({"Cr":0,"Ex":0,"ImRe":0,"MaMe":0,"Pr":0,"PrRe":0,"ReDi":0,"SuSo":0,"ReME":0})")}}.dump() + "\n");
  const auto r = run({"analyze", "--input", dir.file("s.jsonl"), "--output", dir.file("x.csv")});
  CHECK(r.code == 1);
  CHECK(json::parse(r.err).at("errors")[0].at("line") == 1);
}

TEST_CASE("meteor debug subcommand") {
  const auto r = run({"meteor", "--candidate", "the cat sat", "--reference", "the cat sat"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("matches") == 3);
  CHECK(j.at("chunks") == 1);
  CHECK(j.at("score").get<double>() == doctest::Approx(1.0 - 0.5 / 27.0));
}

TEST_CASE("lexicon path from the environment and ingested labels") {
  support::TempDir dir;
  support::write_text(dir.file("lex.json"), R"({"Cr": ["zebra"]})");
  support::write_text(dir.file("c.jsonl"),
                      json{{"review_id", "z"}, {"paper_id", "p"}, {"review_text", "A zebra. A horse."}}.dump() + "\n");
  ::setenv("HPRR_LEXICON", dir.file("lex.json").c_str(), 1);
  auto r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("s.jsonl")});
  ::unsetenv("HPRR_LEXICON");
  REQUIRE(r.code == 0);
  CHECK(read_jsonl(dir.file("s.jsonl"))[1].at("metrics").at("Cr") == 0.5);

  support::write_text(dir.file("labels.tsv"), "z\t1\tSuSo\t1\n");
  r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("t.jsonl"), "--scorer", "ingest",
           "--labels", dir.file("labels.tsv")});
  REQUIRE(r.code == 0);
  const auto m = read_jsonl(dir.file("t.jsonl"))[1].at("metrics");
  CHECK(m.at("SuSo") == 0.5);
  CHECK(m.at("Cr") == 0.0);

  r = run({"score", "--input", dir.file("c.jsonl"), "--output", dir.file("u.jsonl"), "--scorer", "ingest"});
  CHECK(r.code == 1);
}
