#include <algorithm>
#include <array>
#include <cstdint>

#include "hprr/textproc.hpp"

namespace hprr::text {
namespace {

struct Decoded {
  char32_t cp;
  std::size_t len;  // 0 means malformed byte
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0, 0};
  }
  if (i + len > s.size()) return {0, 0};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0, 0};
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms and surrogates are malformed.
  static constexpr std::array<char32_t, 5> kMin = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {0, 0};
  return {cp, len};
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Non-ASCII code points count as word characters unless they fall in a
// punctuation, symbol, space or control block.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA || cp == 0xB2 || cp == 0xB3 ||
                         cp == 0xB9;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // general punctuation .. misc symbols/arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFF3B && cp <= 0xFF40) return false;
  if (cp >= 0xFF5B && cp <= 0xFF65) return false;
  if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
  if (cp == 0x037E || cp == 0x0387 || cp == 0x055C || cp == 0x0589 || cp == 0x05BE) return false;
  return true;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x17F && cp != 0x130 && cp != 0x131 && cp != 0x138 && cp != 0x149 &&
      cp != 0x17F) {
    // Latin Extended-A pairs upper/lower on even/odd, with a shifted run.
    const bool shifted = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
    if (shifted) return (cp % 2 == 1) ? cp + 1 : cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;  // Greek
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;                 // Cyrillic
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

// Does the normalized sentence buffer end with a guarded abbreviation?
bool ends_with_guard(std::string_view buffer) {
  const std::string lower = ascii_lower(buffer);
  for (const auto& guard : abbreviation_guards()) {
    if (lower.size() < guard.size()) continue;
    if (lower.compare(lower.size() - guard.size(), guard.size(), guard) != 0) continue;
    const std::size_t start = lower.size() - guard.size();
    if (start == 0) return true;
    const char prev = lower[start - 1];
    if (prev == ' ' || prev == '(' || prev == '[' || prev == '"' || prev == '\'') return true;
  }
  return false;
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::string current;
  std::size_t start = 0;
  bool in_token = false;
  auto flush = [&](std::size_t end) {
    if (in_token) {
      out.tokens.push_back(std::move(current));
      out.spans.push_back({start, end - start});
      current.clear();
      in_token = false;
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const Decoded d = decode_utf8(text, i);
    if (d.len == 0) {
      flush(i);
      ++i;
      continue;
    }
    if (is_word_char(d.cp)) {
      if (!in_token) {
        in_token = true;
        start = i;
      }
      encode_utf8(to_lower(d.cp), current);
    } else {
      flush(i);
    }
    i += d.len;
  }
  flush(text.size());
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

const std::vector<std::string>& abbreviation_guards() {
  static const std::vector<std::string> guards = {
      "et al.", "e.g.", "i.e.", "fig.", "figs.", "eq.", "eqs.", "sec.", "secs.", "tab.",
      "ref.", "refs.", "vs.", "cf.", "approx.", "resp.", "dr.", "mr.", "mrs.", "ms.",
      "prof.", "no.", "nos.", "vol.", "pp.", "ch.", "app.", "def.", "thm.", "lem.",
      "prop.", "cor.", "alg.", "st.", "jr.", "sr.", "viz.", "ca."};
  return guards;
}

SentenceSeq split_sentences(std::string_view text) {
  SentenceSeq out;
  std::string current;
  auto emit = [&] {
    if (!current.empty()) out.sentences.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_space(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      int newlines = 0;
      while (j < n && is_space(static_cast<unsigned char>(text[j]))) {
        if (text[j] == '\n') ++newlines;
        ++j;
      }
      if (newlines >= 2) {
        emit();
      } else if (!current.empty() && j < n) {
        current.push_back(' ');
      }
      i = j;
      continue;
    }

    current.push_back(c);
    ++i;
    if (!is_terminal(c)) continue;

    while (i < n && (is_terminal(text[i]) || is_closer(text[i]))) current.push_back(text[i++]);
    const bool at_boundary = i == n || is_space(static_cast<unsigned char>(text[i]));
    if (!at_boundary) continue;
    if (c == '.' && ends_with_guard(current)) continue;
    emit();
  }
  emit();
  return out;
}

}  // namespace hprr::text
