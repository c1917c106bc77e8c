#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hprr/metrics.hpp"
#include "hprr/textproc.hpp"

namespace hprr::aspects {

enum class AspectId : std::size_t {
  Criticism = 0,
  Example,
  ImportanceRelevance,
  MaterialsMethods,
  Praise,
  PresentationReporting,
  ResultsDiscussion,
  SuggestionSolution,
};

constexpr std::size_t index(AspectId a) noexcept { return static_cast<std::size_t>(a); }
std::string_view short_name(AspectId a);
std::optional<AspectId> aspect_from_name(std::string_view name);

/// Per-sentence aspect values in [0, 1]; rows are sentences.
struct SentenceLabels {
  std::vector<std::array<double, kAspectCount>> rows;

  std::size_t sentence_count() const noexcept { return rows.size(); }
  double at(std::size_t sentence, AspectId a) const { return rows.at(sentence)[index(a)]; }
  bool operator==(const SentenceLabels&) const = default;
};

/// Scorer contract: labels one review's sentences.
class AspectScorer {
public:
  virtual ~AspectScorer() = default;
  virtual SentenceLabels score(std::string_view review_id,
                               const text::SentenceSeq& sentences) const = 0;
};

/// Aspect -> cue phrases, each cue stored as its token sequence.
class Lexicon {
public:
  Lexicon() = default;

  /// {"Cr": ["lack of", ...], ...}; unknown aspect names are rejected,
  /// aspects absent from the object get no cues.
  static Lexicon from_json(const nlohmann::json& j);
  static Lexicon load(const std::string& path);
  /// Built-in cue lists.
  static const Lexicon& builtin();

  const std::vector<std::vector<std::string>>& cues(AspectId a) const { return cues_[index(a)]; }

private:
  std::array<std::vector<std::vector<std::string>>, kAspectCount> cues_;
};

/// Binary labels from contiguous cue-phrase matches on sentence tokens.
/// Praise and importance cues directly preceded by a negator ("not", "no",
/// "never", "hardly") do not fire.
class LexiconScorer final : public AspectScorer {
public:
  explicit LexiconScorer(Lexicon lexicon = Lexicon::builtin()) : lexicon_(std::move(lexicon)) {}

  SentenceLabels score(std::string_view review_id,
                       const text::SentenceSeq& sentences) const override;
  std::array<double, kAspectCount> score_sentence(std::string_view sentence) const;

private:
  Lexicon lexicon_;
};

/// Labels for one review read from a labeled-sentence file.
struct IngestedReview {
  // (sentence index, aspect) -> value; absent pairs read as 0.
  std::map<std::pair<std::size_t, AspectId>, double> values;
  std::size_t max_index = 0;
};

/// Parses tab-separated rows: review_id, sentence_index, aspect, value.
/// Blank lines and lines starting with '#' are skipped. Errors name the line.
std::map<std::string, IngestedReview> ingest_sentence_labels(std::istream& in);
std::map<std::string, IngestedReview> ingest_sentence_labels_file(const std::string& path);

/// Writes labels in the same row format (zero values omitted).
void write_sentence_labels(std::ostream& out, std::string_view review_id,
                           const SentenceLabels& labels);

/// Labels expanded to a review with a given sentence count.
SentenceLabels to_sentence_labels(const IngestedReview& review, std::size_t sentence_count);

class IngestedScorer final : public AspectScorer {
public:
  explicit IngestedScorer(std::map<std::string, IngestedReview> reviews)
      : reviews_(std::move(reviews)) {}

  /// Throws ValidationError for unknown review ids or indices past the sentence count.
  SentenceLabels score(std::string_view review_id,
                       const text::SentenceSeq& sentences) const override;

private:
  std::map<std::string, IngestedReview> reviews_;
};

/// Component a = sum over sentences of labels[s][a] / sentence count.
AspectVector normalize(const SentenceLabels& labels, const text::SentenceSeq& sentences);

}  // namespace hprr::aspects
