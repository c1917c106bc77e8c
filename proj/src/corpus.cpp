#include "hprr/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "hprr/error.hpp"
#include "hprr/jsonl.hpp"
#include "hprr/parallel.hpp"
#include "hprr/reward.hpp"

namespace hprr::corpus {
namespace {

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r\n\f\v") == s.npos; }

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ValidationError(std::string("field '") + key + "' must be a string");
}

}  // namespace

CorpusRecord record_from_json(const nlohmann::json& j, std::size_t line_no) {
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  CorpusRecord r;
  r.paper_id = optional_string(j, "paper_id").value_or("");
  if (is_blank(r.paper_id)) throw ValidationError("missing paper_id");
  r.review_text = optional_string(j, "review_text").value_or("");
  if (is_blank(r.review_text)) throw ValidationError("missing review_text");
  r.paper_text = optional_string(j, "paper_text").value_or("");
  r.thinking_trace = optional_string(j, "thinking_trace");
  if (r.thinking_trace && is_blank(*r.thinking_trace)) r.thinking_trace.reset();
  r.system = optional_string(j, "system").value_or("");
  r.venue = optional_string(j, "venue").value_or("");
  r.year = optional_string(j, "year").value_or("");
  r.id = optional_string(j, "review_id").value_or(r.paper_id + ":" + std::to_string(line_no));
  if (const auto it = j.find("metrics"); it != j.end() && !it->is_null()) {
    MetricVector v(metrics_from_json_object(*it));
    v.validate();
    r.metrics = v;
  }
  return r;
}

nlohmann::json to_json(const CorpusRecord& r) {
  nlohmann::json j = {{"review_id", r.id},
                      {"paper_id", r.paper_id},
                      {"paper_text", r.paper_text},
                      {"review_text", r.review_text}};
  if (r.thinking_trace) j["thinking_trace"] = *r.thinking_trace;
  if (r.metrics) j["metrics"] = to_json_object(r.metrics->values);
  if (!r.system.empty()) j["system"] = r.system;
  if (!r.venue.empty()) j["venue"] = r.venue;
  if (!r.year.empty()) j["year"] = r.year;
  return j;
}

LoadResult load_corpus(const std::string& path, double max_error_fraction) {
  LoadResult out;
  std::size_t lines = 0;
  io::for_each_record_line(path, [&](std::size_t line_no, std::string_view line) {
    ++lines;
    try {
      out.records.push_back(record_from_json(nlohmann::json::parse(line), line_no));
    } catch (const nlohmann::json::exception& e) {
      out.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const ValidationError& e) {
      out.errors.push_back({line_no, e.what()});
    }
  });
  if (lines > 0 && static_cast<double>(out.errors.size()) >
                       max_error_fraction * static_cast<double>(lines)) {
    std::string summary = path + ": " + std::to_string(out.errors.size()) + " of " +
                          std::to_string(lines) + " lines malformed";
    const std::size_t shown = std::min<std::size_t>(out.errors.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) {
      summary += "; line " + std::to_string(out.errors[i].line) + ": " + out.errors[i].message;
    }
    throw ValidationError(summary);
  }
  return out;
}

double nearest_rank_percentile(std::vector<double> values, unsigned percent) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  if (percent == 0 || percent > 100) throw ValidationError("percent must be in 1..100");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;  // ceil(p n / 100)
  return values[std::max<std::size_t>(rank, 1) - 1];
}

CurationReport curate_rewards(const std::vector<std::string>& ids,
                              const std::vector<double>& rewards,
                              const std::vector<std::string>& groups, unsigned percent) {
  if (ids.size() != rewards.size() || (!groups.empty() && groups.size() != ids.size())) {
    throw Error("curate: size mismatch");
  }
  CurationReport report;
  report.input_count = ids.size();
  report.rewards = rewards;
  std::map<std::string, std::vector<double>> by_group;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    by_group[groups.empty() ? std::string() : groups[i]].push_back(rewards[i]);
  }
  for (const auto& [group, values] : by_group) {
    if (values.size() < 10) {
      throw ValidationError("too few records" +
                            (group.empty() ? std::string() : " in group '" + group + "'") + ": " +
                            std::to_string(values.size()) + " < 10");
    }
    report.thresholds[group] = nearest_rank_percentile(values, percent);
  }
  if (by_group.size() == 1) report.threshold = report.thresholds.begin()->second;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double t = report.thresholds.at(groups.empty() ? std::string() : groups[i]);
    if (rewards[i] > t) report.kept_ids.push_back(ids[i]);
  }
  report.kept_count = report.kept_ids.size();
  if (groups.empty()) report.thresholds.clear();
  return report;
}

CurationReport curate_top_decile(const std::vector<CorpusRecord>& records,
                                 const aspects::AspectScorer& scorer,
                                 const CurationOptions& options) {
  if (records.size() < 10) {
    throw ValidationError("too few records: " + std::to_string(records.size()) + " < 10");
  }
  std::vector<MetricVector> vectors(records.size());
  parallel_for(records.size(), options.workers, [&](std::size_t i) {
    const auto& r = records[i];
    vectors[i] = r.metrics ? *r.metrics
                           : reward::compute_metric_vector(r.id, r.review_text, r.paper_text, scorer);
  });
  const auto rewards = reward::hprr_batch(vectors, reward::uniform_weights());
  std::vector<std::string> ids, groups;
  for (const auto& r : records) {
    ids.push_back(r.id);
    if (options.group_by == "venue") groups.push_back(r.venue);
    else if (options.group_by == "year") groups.push_back(r.year);
    else if (!options.group_by.empty()) throw ValidationError("unknown group-by tag '" + options.group_by + "'");
  }
  return curate_rewards(ids, rewards, groups, options.percent);
}

nlohmann::json to_json(const CurationReport& r) {
  nlohmann::json j = {{"input_count", r.input_count},
                      {"threshold", r.threshold},
                      {"percentile", "nearest-rank"},
                      {"kept_count", r.kept_count},
                      {"kept_ids", r.kept_ids}};
  if (!r.thresholds.empty()) j["thresholds"] = r.thresholds;
  return j;
}

// SFT export ------------------------------------------------------------------

std::string_view user_prompt_prefix() {
  static constexpr std::string_view kPrefix =
      "You are a member of the scientific community tasked with peer review. \n"
      "Review the following paper content.\n"
      "\n"
      "### Paper Content\n"
      "\n";
  return kPrefix;
}

std::string user_message(std::string_view paper_content) {
  std::string out(user_prompt_prefix());
  out += paper_content;
  return out;
}

namespace {
constexpr std::string_view kThinkOpen = "<think> ";
constexpr std::string_view kThinkClose = " </think>\n\n";
}  // namespace

std::string assistant_message(std::string_view review, const std::optional<std::string>& trace) {
  if (!trace) return std::string(review);
  std::string out(kThinkOpen);
  out += *trace;
  out += kThinkClose;
  out += review;
  return out;
}

ParsedAssistant parse_assistant_message(std::string_view assistant) {
  ParsedAssistant out;
  if (assistant.substr(0, kThinkOpen.size()) == kThinkOpen) {
    const auto close = assistant.find(kThinkClose, kThinkOpen.size());
    if (close != assistant.npos) {
      out.trace = std::string(assistant.substr(kThinkOpen.size(), close - kThinkOpen.size()));
      out.review = std::string(assistant.substr(close + kThinkClose.size()));
      return out;
    }
  }
  out.review = std::string(assistant);
  return out;
}

SftExport export_sft(const std::vector<CorpusRecord>& records) {
  SftExport out;
  for (const auto& r : records) {
    if (is_blank(r.paper_text)) {
      out.warnings.push_back("record " + r.id + ": blank paper text, skipped");
      continue;
    }
    out.rows.push_back({{"user", user_message(r.paper_text)},
                        {"assistant", assistant_message(r.review_text, r.thinking_trace)}});
  }
  return out;
}

}  // namespace hprr::corpus
