#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hprr/analyze.hpp"
#include "hprr/aspects.hpp"
#include "hprr/corpus.hpp"
#include "hprr/error.hpp"
#include "hprr/jsonl.hpp"
#include "hprr/meteor.hpp"
#include "hprr/parallel.hpp"
#include "hprr/prefit.hpp"
#include "hprr/reward.hpp"
#include "hprr/textproc.hpp"

namespace hprr::cli {
namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string weights = "uniform";
  std::string scorer = "lexicon";
  std::string labels;
  std::uint64_t seed = 42;
  std::size_t folds = 5;
  std::string crm_mode = "soft";
  std::size_t workers = 1;
  std::string estimators = "all";
  double l1_lambda = 0.1;
  double epsilon = 1e-12;
  unsigned percent = 90;
  std::string group_by;
  std::string kept_output;
  std::string weights_out;
  std::string profile_output;
  std::string histogram_output;
  std::string system;
  std::size_t bins = 20;
  std::string range = "auto";
  std::string candidate;
  std::string reference;
};

struct RunLog {
  std::vector<json> errors;
  std::size_t warnings = 0;

  void error(std::string message) { errors.push_back({{"message", std::move(message)}}); }
  void error_at(std::string_view key, json where, std::string message) {
    errors.push_back({{std::string(key), std::move(where)}, {"message", std::move(message)}});
  }
};

void require_input(const std::string& path, const char* flag) {
  namespace fs = std::filesystem;
  if (path.empty()) throw ValidationError(std::string(flag) + " is required");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ValidationError("cannot read " + path);
}

void require_output(const std::string& path, const char* flag) {
  namespace fs = std::filesystem;
  if (path.empty()) throw ValidationError(std::string(flag) + " is required");
  const auto parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw ValidationError("output directory does not exist: " + parent.string());
  }
}

void optional_output(const std::string& path, const char* flag) {
  if (!path.empty()) require_output(path, flag);
}

std::string jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::unique_ptr<aspects::AspectScorer> make_scorer(const RunConfig& cfg) {
  if (cfg.scorer == "ingest") {
    require_input(cfg.labels, "--labels");
    return std::make_unique<aspects::IngestedScorer>(aspects::ingest_sentence_labels_file(cfg.labels));
  }
  if (const char* path = std::getenv("HPRR_LEXICON"); path != nullptr && *path != '\0') {
    return std::make_unique<aspects::LexiconScorer>(aspects::Lexicon::load(path));
  }
  return std::make_unique<aspects::LexiconScorer>();
}

void record_load_errors(const corpus::LoadResult& loaded, RunLog& log) {
  for (const auto& e : loaded.errors) log.error_at("line", e.line, e.message);
}

json summary(const RunConfig& cfg, const RunLog& log) {
  return {{"command", cfg.command},
          {"seed", cfg.seed},
          {"error_count", log.errors.size()},
          {"warnings", log.warnings},
          {"errors", log.errors}};
}

// score ------------------------------------------------------------------------

void cmd_score(const RunConfig& cfg, RunLog& log, std::ostream& out) {
  require_input(cfg.input, "--input");
  require_output(cfg.output, "--output");
  const auto weights = reward::resolve_weights(cfg.weights);
  const auto scorer = make_scorer(cfg);
  const auto loaded = corpus::load_corpus(cfg.input);
  record_load_errors(loaded, log);

  const auto& records = loaded.records;
  std::vector<std::optional<MetricVector>> vectors(records.size());
  std::vector<std::string> failures(records.size());
  parallel_for(records.size(), cfg.workers, [&](std::size_t i) {
    try {
      vectors[i] = reward::compute_metric_vector(records[i].id, records[i].review_text,
                                                 records[i].paper_text, *scorer);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  std::vector<json> rows{io::header_record("score", cfg.seed)};
  rows.front()["_header"]["weights"] = to_string(weights.tag);
  std::size_t written = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!vectors[i]) {
      log.error_at("id", records[i].id, failures[i]);
      continue;
    }
    if (records[i].paper_text.find_first_not_of(" \t\r\n") == std::string::npos) ++log.warnings;
    const auto scored = reward::make_scored(records[i].id, records[i].system, *vectors[i]);
    auto row = reward::to_json(scored);
    row["paper_id"] = records[i].paper_id;
    row["reward"] = reward::hprr(*vectors[i], weights);
    rows.push_back(std::move(row));
    ++written;
  }
  io::write_file_atomic(cfg.output, jsonl(rows));
  out << json{{"command", "score"}, {"records", written}, {"warnings", log.warnings}}.dump() << '\n';
}

// fit --------------------------------------------------------------------------

std::vector<prefit::Estimator> parse_estimators(const std::string& list) {
  if (list == "all") {
    return {prefit::Estimator::BradleyTerry, prefit::Estimator::AdaptedBradleyTerry,
            prefit::Estimator::ConstrainedReward};
  }
  std::vector<prefit::Estimator> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto e = prefit::estimator_from_string(item);
    if (!e) throw ValidationError("unknown estimator '" + item + "'");
    out.push_back(*e);
  }
  if (out.empty()) throw ValidationError("no estimators requested");
  return out;
}

void cmd_fit(const RunConfig& cfg, RunLog& log, std::ostream& out) {
  require_input(cfg.input, "--input");
  require_output(cfg.output, "--output");
  optional_output(cfg.weights_out, "--weights-out");
  if (cfg.folds < 2) throw ValidationError("--folds must be at least 2");
  const auto estimators = parse_estimators(cfg.estimators);
  const auto matches = prefit::load_preferences(cfg.input);

  prefit::FitOptions options;
  options.crm.l1_lambda = cfg.l1_lambda;
  options.crm.epsilon = cfg.epsilon;
  options.crm.slack_mode = cfg.crm_mode == "hard" ? prefit::SlackMode::Hard : prefit::SlackMode::Soft;
  prefit::CvOptions cv;
  cv.folds = cfg.folds;
  cv.seed = cfg.seed;
  cv.fit = options;

  std::vector<json> rows{io::header_record("fit", cfg.seed)};
  rows.front()["_header"]["matches"] = matches.size();
  std::optional<prefit::Weights> exported;
  std::size_t succeeded = 0;
  for (const auto estimator : estimators) {
    const std::string name(prefit::to_string(estimator));
    try {
      auto result = prefit::fit(matches, estimator, options);
      result.seed = cfg.seed;
      try {
        const auto report = prefit::cross_validate(matches, estimator, cv);
        result.cv_f1 = report.mean_f1;
        result.fold_f1 = report.fold_f1;
        result.tie_bands = report.tie_bands;
      } catch (const Error& e) {
        result.warnings.push_back(std::string("cross-validation skipped: ") + e.what());
      }
      log.warnings += result.warnings.size();
      if (!exported) exported = result.smoothed;
      rows.push_back(prefit::to_json(result));
      ++succeeded;
    } catch (const InfeasibleError& e) {
      rows.push_back({{"estimator", name}, {"error", e.what()}, {"conflicts", e.conflicts()}});
      log.errors.push_back({{"estimator", name}, {"message", e.what()}, {"conflicts", e.conflicts()}});
    } catch (const Error& e) {
      rows.push_back({{"estimator", name}, {"error", e.what()}});
      log.error_at("estimator", name, e.what());
    }
  }
  io::write_file_atomic(cfg.output, jsonl(rows));
  if (!cfg.weights_out.empty() && exported) {
    WeightVector w;
    w.values = *exported;
    io::write_file_atomic(cfg.weights_out, reward::to_json(w).dump(2) + "\n");
  }
  out << json{{"command", "fit"}, {"estimators", succeeded}, {"warnings", log.warnings}}.dump()
      << '\n';
}

// curate -----------------------------------------------------------------------

void cmd_curate(const RunConfig& cfg, RunLog& log, std::ostream& out) {
  require_input(cfg.input, "--input");
  require_output(cfg.output, "--output");
  optional_output(cfg.kept_output, "--kept-output");
  const auto scorer = make_scorer(cfg);
  const auto loaded = corpus::load_corpus(cfg.input);
  record_load_errors(loaded, log);

  corpus::CurationOptions options;
  options.percent = cfg.percent;
  options.group_by = cfg.group_by;
  options.workers = cfg.workers;
  const auto report = corpus::curate_top_decile(loaded.records, *scorer, options);

  std::vector<json> rows{io::header_record("curate", cfg.seed), corpus::to_json(report)};
  io::write_file_atomic(cfg.output, jsonl(rows));
  if (!cfg.kept_output.empty()) {
    std::vector<json> kept{io::header_record("curate", cfg.seed)};
    std::size_t next = 0;
    for (const auto& r : loaded.records) {
      if (next < report.kept_ids.size() && r.id == report.kept_ids[next]) {
        kept.push_back(corpus::to_json(r));
        ++next;
      }
    }
    io::write_file_atomic(cfg.kept_output, jsonl(kept));
  }
  out << json{{"command", "curate"}, {"input", report.input_count}, {"kept", report.kept_count},
              {"threshold", report.threshold}}.dump()
      << '\n';
}

// export-sft -------------------------------------------------------------------

void cmd_export_sft(const RunConfig& cfg, RunLog& log, std::ostream& out) {
  require_input(cfg.input, "--input");
  require_output(cfg.output, "--output");
  const auto loaded = corpus::load_corpus(cfg.input);
  record_load_errors(loaded, log);
  const auto exported = corpus::export_sft(loaded.records);
  log.warnings += exported.warnings.size();
  io::write_file_atomic(cfg.output, jsonl(exported.rows));
  out << json{{"command", "export-sft"}, {"rows", exported.rows.size()},
              {"warnings", exported.warnings}}.dump()
      << '\n';
}

// analyze ----------------------------------------------------------------------

std::optional<std::pair<double, double>> parse_range(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("--range must be 'auto' or 'low,high'");
  try {
    return std::make_pair(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw ValidationError("--range must be 'auto' or 'low,high'");
  }
}

std::string csv_header(const RunConfig& cfg, std::string_view what) {
  return "# hprr analyze " + std::string(what) + " seed=" + std::to_string(cfg.seed) + "\n";
}

void cmd_analyze(const RunConfig& cfg, RunLog& log, std::ostream& out) {
  require_input(cfg.input, "--input");
  require_output(cfg.output, "--output");
  optional_output(cfg.profile_output, "--profile-output");
  optional_output(cfg.histogram_output, "--histogram-output");
  if (!cfg.histogram_output.empty() && cfg.system.empty()) {
    throw ValidationError("--histogram-output needs --system");
  }
  const auto range = parse_range(cfg.range);

  std::vector<reward::ScoredReview> scored;
  io::for_each_record_line(cfg.input, [&](std::size_t line_no, std::string_view line) {
    try {
      scored.push_back(reward::scored_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      log.error_at("line", line_no, std::string("invalid JSON: ") + e.what());
    } catch (const ValidationError& e) {
      log.error_at("line", line_no, e.what());
    }
  });

  const auto summaries = analyze::summarize(scored);
  for (const auto& s : summaries) {
    if (s.stored_reward_mismatches > 0) ++log.warnings;
  }
  io::write_file_atomic(cfg.output, csv_header(cfg, "summary") + analyze::summary_csv(summaries));

  json result = {{"command", "analyze"}, {"systems", summaries.size()}, {"warnings", log.warnings}};
  if (!cfg.profile_output.empty()) {
    const auto profile = analyze::normalized_profile(summaries);
    io::write_file_atomic(cfg.profile_output,
                          csv_header(cfg, "profile") + analyze::profile_csv(profile));
    result["dropped_metrics"] = profile.dropped_metrics;
  }
  if (!cfg.histogram_output.empty()) {
    const auto bins = analyze::reward_histogram(scored, cfg.system, cfg.bins, range);
    io::write_file_atomic(cfg.histogram_output,
                          csv_header(cfg, "histogram") + analyze::histogram_csv(bins));
  }
  out << result.dump() << '\n';
}

// meteor -----------------------------------------------------------------------

void cmd_meteor(const RunConfig& cfg, RunLog&, std::ostream& out) {
  optional_output(cfg.output, "--output");
  const auto candidate = text::tokenize(cfg.candidate);
  const auto reference = text::tokenize(cfg.reference);
  const auto alignment = meteor::align(candidate, reference);
  const auto stats =
      meteor::stats_from_alignment(alignment, candidate.tokens.size(), reference.tokens.size());
  json pairs = json::array();
  for (const auto& p : alignment.pairs) {
    pairs.push_back({{"candidate", p.candidate},
                     {"reference", p.reference},
                     {"stage", p.stage == meteor::MatchStage::Exact ? "exact" : "stem"}});
  }
  const json result = {{"matches", stats.matches}, {"chunks", stats.chunks},
                       {"precision", stats.precision}, {"recall", stats.recall},
                       {"fmean", stats.fmean},     {"penalty", stats.penalty},
                       {"score", stats.score},     {"alignment", pairs}};
  if (cfg.output.empty()) {
    out << result.dump() << '\n';
  } else {
    io::write_file_atomic(cfg.output, result.dump(2) + "\n");
  }
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Seed echoed in outputs and used for folds")
      ->capture_default_str();
  sub->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
}

void add_scoring(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--scorer", cfg.scorer, "Aspect scorer")
      ->check(CLI::IsMember({"lexicon", "ingest"}))
      ->capture_default_str();
  sub->add_option("--labels", cfg.labels, "Sentence label file for --scorer ingest");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Peer-review reward toolkit"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "Score reviews into metric vectors and rewards");
  score->add_option("--input", cfg.input, "Corpus JSON lines");
  score->add_option("--output", cfg.output, "Scored JSON lines");
  score->add_option("--weights", cfg.weights, "uniform, human or a weight config path")
      ->capture_default_str();
  add_scoring(score, cfg);
  add_common(score, cfg);

  auto* fit = app.add_subcommand("fit", "Fit reward weights from preference matches");
  fit->add_option("--input", cfg.input, "Preference JSON lines");
  fit->add_option("--output", cfg.output, "Fit results JSON lines");
  fit->add_option("--estimators", cfg.estimators, "all or a comma list of bt,abt,crm")
      ->capture_default_str();
  fit->add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  fit->add_option("--crm-mode", cfg.crm_mode, "Constraint handling for crm")
      ->check(CLI::IsMember({"hard", "soft"}))
      ->capture_default_str();
  fit->add_option("--l1-lambda", cfg.l1_lambda, "L1 weight in the crm objective")
      ->capture_default_str();
  fit->add_option("--epsilon", cfg.epsilon, "Ordering margin for crm")->capture_default_str();
  fit->add_option("--weights-out", cfg.weights_out,
                  "Write the first successful estimator's smoothed weights as a weight config");
  add_common(fit, cfg);

  auto* curate = app.add_subcommand("curate", "Keep records above a reward percentile");
  curate->add_option("--input", cfg.input, "Corpus JSON lines");
  curate->add_option("--output", cfg.output, "Curation report");
  curate->add_option("--kept-output", cfg.kept_output, "Kept records as JSON lines");
  curate->add_option("--percent", cfg.percent, "Percentile")
      ->check(CLI::Range(1u, 100u))
      ->capture_default_str();
  curate->add_option("--group-by", cfg.group_by, "Per-group thresholds")
      ->check(CLI::IsMember({"", "venue", "year"}));
  add_scoring(curate, cfg);
  add_common(curate, cfg);

  auto* sft = app.add_subcommand("export-sft", "Write chat-format fine-tuning rows");
  sft->add_option("--input", cfg.input, "Corpus JSON lines");
  sft->add_option("--output", cfg.output, "Rows as JSON lines");
  add_common(sft, cfg);

  auto* an = app.add_subcommand("analyze", "Summaries, normalized profiles and histograms");
  an->add_option("--input", cfg.input, "Scored JSON lines");
  an->add_option("--output", cfg.output, "Per-system summary CSV");
  an->add_option("--profile-output", cfg.profile_output, "Normalized profile CSV");
  an->add_option("--histogram-output", cfg.histogram_output, "Reward histogram CSV");
  an->add_option("--system", cfg.system, "System for the histogram");
  an->add_option("--bins", cfg.bins, "Histogram bins")->capture_default_str();
  an->add_option("--range", cfg.range, "auto or low,high")->capture_default_str();
  add_common(an, cfg);

  auto* met = app.add_subcommand("meteor", "Score one candidate against one reference");
  met->add_option("--candidate", cfg.candidate, "Candidate text")->required();
  met->add_option("--reference", cfg.reference, "Reference text")->required();
  met->add_option("--output", cfg.output, "Write the result here instead of stdout");
  add_common(met, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    err << json{{"command", nullptr}, {"error_count", 1}, {"errors", {{{"message", e.what()}}}}}.dump()
        << '\n';
    return 2;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  RunLog log;
  try {
    if (cfg.command == "score") cmd_score(cfg, log, out);
    else if (cfg.command == "fit") cmd_fit(cfg, log, out);
    else if (cfg.command == "curate") cmd_curate(cfg, log, out);
    else if (cfg.command == "export-sft") cmd_export_sft(cfg, log, out);
    else if (cfg.command == "analyze") cmd_analyze(cfg, log, out);
    else if (cfg.command == "meteor") cmd_meteor(cfg, log, out);
  } catch (const std::exception& e) {
    log.error(e.what());
  }
  if (log.errors.empty()) return 0;
  err << summary(cfg, log).dump() << '\n';
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"hprr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hprr::cli
