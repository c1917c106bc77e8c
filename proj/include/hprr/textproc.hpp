#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hprr::text {

struct Span {
  std::size_t offset = 0;  // byte offset into the source text
  std::size_t length = 0;  // byte length in the source text
  bool operator==(const Span&) const = default;
};

/// Lowercased word tokens with their byte spans in the source.
struct TokenSeq {
  std::vector<std::string> tokens;
  std::vector<Span> spans;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
};

struct SentenceSeq {
  std::vector<std::string> sentences;

  std::size_t count() const noexcept { return sentences.size(); }
  bool empty() const noexcept { return sentences.empty(); }
};

/// Maximal runs of letters/digits, lowercased. Punctuation and symbols are
/// dropped. Input is UTF-8; malformed bytes act as separators.
TokenSeq tokenize(std::string_view text);

/// Whitespace runs collapsed to one space, leading/trailing whitespace removed.
std::string normalize_whitespace(std::string_view text);

/// Rule-based splitter: a sentence ends at '.', '!' or '?' (plus any closing
/// quotes or brackets) followed by whitespace or end of text, unless the word
/// carrying the period is a guarded abbreviation. A blank line always ends a
/// sentence. Joining the result with single spaces gives
/// normalize_whitespace(text).
SentenceSeq split_sentences(std::string_view text);

/// Abbreviations that never end a sentence (lowercase, with trailing period).
const std::vector<std::string>& abbreviation_guards();

/// Porter (1980) stemmer for lowercase ASCII words. Tokens with other
/// characters, and tokens of length <= 2, are returned unchanged.
std::string stem(std::string_view token);

}  // namespace hprr::text
