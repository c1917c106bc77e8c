#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hprr/aspects.hpp"
#include "hprr/metrics.hpp"

namespace hprr::corpus {

struct CorpusRecord {
  std::string id;  // review_id when given, else "<paper_id>:<line>"
  std::string paper_id;
  std::string paper_text;
  std::string review_text;
  std::optional<std::string> thinking_trace;
  std::optional<MetricVector> metrics;
  std::string system;  // optional system label
  std::string venue;
  std::string year;
};

struct LineError {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::vector<LineError> errors;  // malformed lines that were skipped
};

/// Parses one JSON-lines record. Throws ValidationError on schema violations.
CorpusRecord record_from_json(const nlohmann::json& j, std::size_t line_no);
nlohmann::json to_json(const CorpusRecord& r);

/// Loads a JSON-lines corpus. Malformed lines are reported with their line
/// number; more than max_error_fraction of them aborts with a summary.
LoadResult load_corpus(const std::string& path, double max_error_fraction = 0.01);

/// Value at 1-based rank ceil(percent/100 * n) of the sorted values.
double nearest_rank_percentile(std::vector<double> values, unsigned percent);

struct CurationOptions {
  unsigned percent = 90;
  // Empty: one global threshold. "venue" or "year": one threshold per tag value.
  std::string group_by;
  std::size_t workers = 1;
};

struct CurationReport {
  std::size_t input_count = 0;
  double threshold = 0.0;                    // global threshold (or of the single group)
  std::map<std::string, double> thresholds;  // per group when grouping
  std::size_t kept_count = 0;
  std::vector<std::string> kept_ids;
  std::vector<double> rewards;  // uniform reward per input record
};

/// Uniform reward per record (precomputed metrics when present, otherwise
/// scored), then keeps records strictly above the nearest-rank percentile.
CurationReport curate_top_decile(const std::vector<CorpusRecord>& records,
                                 const aspects::AspectScorer& scorer,
                                 const CurationOptions& options = {});

/// Same selection from rewards already computed, one per id.
CurationReport curate_rewards(const std::vector<std::string>& ids,
                              const std::vector<double>& rewards,
                              const std::vector<std::string>& groups, unsigned percent = 90);

nlohmann::json to_json(const CurationReport& r);

// SFT export ------------------------------------------------------------------

/// Fixed user-message header placed before the paper content.
std::string_view user_prompt_prefix();
std::string user_message(std::string_view paper_content);
/// "<think> trace </think>\n\n" + review, or the bare review without a trace.
std::string assistant_message(std::string_view review, const std::optional<std::string>& trace);

struct ParsedAssistant {
  std::optional<std::string> trace;
  std::string review;
};
ParsedAssistant parse_assistant_message(std::string_view assistant);

struct SftExport {
  std::vector<nlohmann::json> rows;  // {"user": ..., "assistant": ...}
  std::vector<std::string> warnings;
};

/// Records with a blank paper text are skipped with a warning.
SftExport export_sft(const std::vector<CorpusRecord>& records);

}  // namespace hprr::corpus
