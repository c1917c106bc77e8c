#include "hprr/aspects.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hprr/error.hpp"

namespace hprr::aspects {

std::string_view short_name(AspectId a) { return kMetricNames[index(a)]; }

std::optional<AspectId> aspect_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kAspectCount; ++i) {
    if (kMetricNames[i] == name) return static_cast<AspectId>(i);
  }
  return std::nullopt;
}

Lexicon Lexicon::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("lexicon must be a JSON object");
  Lexicon lex;
  for (const auto& [key, phrases] : j.items()) {
    const auto aspect = aspect_from_name(key);
    if (!aspect) throw ValidationError("unknown aspect '" + key + "' in lexicon");
    if (!phrases.is_array()) throw ValidationError("lexicon entry '" + key + "' must be an array");
    for (const auto& p : phrases) {
      if (!p.is_string()) throw ValidationError("lexicon entry '" + key + "' has a non-string cue");
      auto tokens = text::tokenize(p.get<std::string>()).tokens;
      if (!tokens.empty()) lex.cues_[index(*aspect)].push_back(std::move(tokens));
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("lexicon " + path + ": " + e.what());
  }
  return from_json(j);
}

namespace {

bool negated(const std::vector<std::string>& tokens, std::size_t start) {
  if (start == 0) return false;
  const std::string& prev = tokens[start - 1];
  return prev == "not" || prev == "no" || prev == "never" || prev == "hardly";
}

bool contains_cue(const std::vector<std::string>& tokens, const std::vector<std::string>& cue,
                  bool check_negation) {
  if (cue.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + cue.size() <= tokens.size(); ++start) {
    bool hit = true;
    for (std::size_t k = 0; k < cue.size(); ++k) {
      if (tokens[start + k] != cue[k]) {
        hit = false;
        break;
      }
    }
    if (hit && !(check_negation && negated(tokens, start))) return true;
  }
  return false;
}

}  // namespace

std::array<double, kAspectCount> LexiconScorer::score_sentence(std::string_view sentence) const {
  const auto tokens = text::tokenize(sentence).tokens;
  std::array<double, kAspectCount> row{};
  for (std::size_t a = 0; a < kAspectCount; ++a) {
    const auto aspect = static_cast<AspectId>(a);
    const bool negatable = aspect == AspectId::Praise || aspect == AspectId::ImportanceRelevance;
    for (const auto& cue : lexicon_.cues(aspect)) {
      if (contains_cue(tokens, cue, negatable)) {
        row[a] = 1.0;
        break;
      }
    }
  }
  return row;
}

SentenceLabels LexiconScorer::score(std::string_view, const text::SentenceSeq& sentences) const {
  SentenceLabels labels;
  labels.rows.reserve(sentences.count());
  for (const auto& s : sentences.sentences) labels.rows.push_back(score_sentence(s));
  return labels;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::map<std::string, IngestedReview> ingest_sentence_labels(std::istream& in) {
  std::map<std::string, IngestedReview> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "labels line " + std::to_string(line_no) + ": ";
    const auto fields = split_tabs(line);
    if (fields.size() != 4) throw ValidationError(where + "expected 4 tab-separated fields");
    const std::string review_id(fields[0]);
    if (review_id.empty()) throw ValidationError(where + "empty review id");

    std::size_t sentence = 0;
    auto [p1, ec1] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), sentence);
    if (ec1 != std::errc() || p1 != fields[1].data() + fields[1].size()) {
      throw ValidationError(where + "bad sentence index '" + std::string(fields[1]) + "'");
    }
    const auto aspect = aspect_from_name(fields[2]);
    if (!aspect) throw ValidationError(where + "unknown aspect '" + std::string(fields[2]) + "'");

    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(std::string(fields[3]), &used);
      if (used != fields[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(where + "bad value '" + std::string(fields[3]) + "'");
    }
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
      throw ValidationError(where + "value " + std::string(fields[3]) + " outside [0, 1]");
    }
    auto& review = out[review_id];
    const auto [it, inserted] = review.values.emplace(std::make_pair(sentence, *aspect), value);
    if (!inserted) {
      throw ValidationError(where + "duplicate (sentence " + std::to_string(sentence) + ", " +
                            std::string(short_name(*aspect)) + ") for review " + review_id);
    }
    review.max_index = std::max(review.max_index, sentence);
  }
  return out;
}

std::map<std::string, IngestedReview> ingest_sentence_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open labels file " + path);
  return ingest_sentence_labels(in);
}

void write_sentence_labels(std::ostream& out, std::string_view review_id,
                           const SentenceLabels& labels) {
  for (std::size_t s = 0; s < labels.rows.size(); ++s) {
    for (std::size_t a = 0; a < kAspectCount; ++a) {
      const double v = labels.rows[s][a];
      if (v == 0.0) continue;
      std::ostringstream value;
      value.precision(17);
      value << v;
      out << review_id << '\t' << s << '\t' << kMetricNames[a] << '\t' << value.str() << '\n';
    }
  }
}

SentenceLabels to_sentence_labels(const IngestedReview& review, std::size_t sentence_count) {
  SentenceLabels labels;
  labels.rows.assign(sentence_count, {});
  for (const auto& [key, value] : review.values) {
    const auto [sentence, aspect] = key;
    if (sentence >= sentence_count) {
      throw ValidationError("label for sentence " + std::to_string(sentence) + " but review has " +
                            std::to_string(sentence_count) + " sentences");
    }
    labels.rows[sentence][index(aspect)] = value;
  }
  return labels;
}

SentenceLabels IngestedScorer::score(std::string_view review_id,
                                     const text::SentenceSeq& sentences) const {
  const auto it = reviews_.find(std::string(review_id));
  if (it == reviews_.end()) {
    throw ValidationError("no sentence labels for review '" + std::string(review_id) + "'");
  }
  return to_sentence_labels(it->second, sentences.count());
}

AspectVector normalize(const SentenceLabels& labels, const text::SentenceSeq& sentences) {
  const std::size_t n = sentences.count();
  if (n == 0) throw ValidationError("empty review");
  if (labels.sentence_count() != n) {
    throw ValidationError("label rows (" + std::to_string(labels.sentence_count()) +
                          ") do not match sentence count (" + std::to_string(n) + ")");
  }
  AspectVector v;
  for (const auto& row : labels.rows) {
    for (std::size_t a = 0; a < kAspectCount; ++a) v[a] += row[a];
  }
  for (std::size_t a = 0; a < kAspectCount; ++a) v[a] /= static_cast<double>(n);
  return v;
}

}  // namespace hprr::aspects
