#include "hprr/meteor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace hprr::meteor {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Tokens interned to dense ids so the search never touches strings.
struct Interned {
  std::vector<int> cand_word, ref_word;
  std::vector<int> cand_stem, ref_stem;
  int word_count = 0;
  int stem_count = 0;
};

Interned intern(const text::TokenSeq& cand, const text::TokenSeq& ref) {
  Interned out;
  std::unordered_map<std::string, int> words, stems;
  auto word_id = [&](const std::string& w) {
    auto [it, inserted] = words.try_emplace(w, static_cast<int>(words.size()));
    return it->second;
  };
  auto stem_id = [&](const std::string& w) {
    auto [it, inserted] = stems.try_emplace(text::stem(w), static_cast<int>(stems.size()));
    return it->second;
  };
  for (const auto& t : cand.tokens) {
    out.cand_word.push_back(word_id(t));
    out.cand_stem.push_back(stem_id(t));
  }
  for (const auto& t : ref.tokens) {
    out.ref_word.push_back(word_id(t));
    out.ref_stem.push_back(stem_id(t));
  }
  out.word_count = static_cast<int>(words.size());
  out.stem_count = static_cast<int>(stems.size());
  return out;
}

// Falling factorial n!/(n-k)!, the number of injective maps of k items into n.
double arrangements(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

// Per-id quotas for both stages. Stage-1 quota per word is min(count_c, count_r);
// the leftovers of a word are one-sided, so stage-2 quotas per stem are fixed
// regardless of which copies stage 1 consumed.
struct Quotas {
  std::vector<int> exact;  // per word id
  std::vector<int> stem;   // per stem id
  double alignment_count = 1.0;
};

Quotas compute_quotas(const Interned& in) {
  Quotas q;
  std::vector<int> cw(in.word_count, 0), rw(in.word_count, 0);
  for (int w : in.cand_word) ++cw[w];
  for (int w : in.ref_word) ++rw[w];
  q.exact.assign(in.word_count, 0);
  std::vector<int> word_stem(in.word_count, -1);
  for (std::size_t i = 0; i < in.cand_word.size(); ++i) word_stem[in.cand_word[i]] = in.cand_stem[i];
  for (std::size_t i = 0; i < in.ref_word.size(); ++i) word_stem[in.ref_word[i]] = in.ref_stem[i];

  std::vector<int> cs(in.stem_count, 0), rs(in.stem_count, 0);
  for (int w = 0; w < in.word_count; ++w) {
    q.exact[w] = std::min(cw[w], rw[w]);
    q.alignment_count *= arrangements(std::max(cw[w], rw[w]), q.exact[w]);
    cs[word_stem[w]] += cw[w] - q.exact[w];
    rs[word_stem[w]] += rw[w] - q.exact[w];
  }
  q.stem.assign(in.stem_count, 0);
  for (int s = 0; s < in.stem_count; ++s) {
    q.stem[s] = std::min(cs[s], rs[s]);
    q.alignment_count *= arrangements(std::max(cs[s], rs[s]), q.stem[s]);
  }
  return q;
}

// Depth-first search over candidate positions with branch and bound on chunks.
// Feasibility is tracked per word (copies left vs exact quota left) and per stem
// (copies free for the stem stage vs stem quota left) so dead branches stop early.
class ExactSearch {
public:
  ExactSearch(const Interned& in, const Quotas& q)
      : in_(in), exact_left_(q.exact), stem_left_(q.stem) {
    const std::size_t nc = in.cand_word.size();
    match_.assign(nc, kNone);
    stage_.assign(nc, MatchStage::Exact);
    ref_used_.assign(in.ref_word.size(), false);
    word_stem_.assign(in.word_count, 0);
    for (std::size_t i = 0; i < nc; ++i) word_stem_[in.cand_word[i]] = in.cand_stem[i];
    for (std::size_t j = 0; j < in.ref_word.size(); ++j) word_stem_[in.ref_word[j]] = in.ref_stem[j];
    cand_left_.assign(in.word_count, 0);
    for (int w : in.cand_word) ++cand_left_[w];
    ref_free_.assign(in.word_count, 0);
    for (int w : in.ref_word) ++ref_free_[w];
    stem_avail_.assign(in.stem_count, 0);
    for (int w = 0; w < in.word_count; ++w) stem_avail_[word_stem_[w]] += cand_left_[w] - exact_left_[w];
  }

  std::vector<MatchedPair> run() {
    dfs(0, kNone, 0);
    return best_;
  }

private:
  const Interned& in_;
  std::vector<int> exact_left_, stem_left_;
  std::vector<std::size_t> match_;
  std::vector<MatchStage> stage_;
  std::vector<bool> ref_used_;
  std::vector<int> word_stem_;
  std::vector<int> cand_left_;   // candidate copies of each word at positions >= i
  std::vector<int> ref_free_;    // unused reference copies of each word
  std::vector<int> stem_avail_;  // sum over words of the stem: cand_left - exact_left
  std::vector<MatchedPair> best_;
  std::size_t best_chunks_ = kNone;

  bool feasible(int w, int s) const {
    return cand_left_[w] >= exact_left_[w] && stem_avail_[s] >= stem_left_[s];
  }

  void record(std::size_t chunks) {
    for (int left : exact_left_) if (left != 0) return;
    for (int left : stem_left_) if (left != 0) return;
    best_chunks_ = chunks;
    best_.clear();
    for (std::size_t c = 0; c < match_.size(); ++c) {
      if (match_[c] != kNone) best_.push_back({c, match_[c], stage_[c]});
    }
  }

  // prev_ref: reference index matched at position i-1, or kNone.
  void dfs(std::size_t i, std::size_t prev_ref, std::size_t chunks) {
    if (best_chunks_ != kNone && chunks >= best_chunks_) return;
    if (i == match_.size()) {
      record(chunks);
      return;
    }
    const int w = in_.cand_word[i];
    const int s = in_.cand_stem[i];
    --cand_left_[w];
    --stem_avail_[s];

    auto try_ref = [&](std::size_t j) {
      if (ref_used_[j]) return;
      const int rw = in_.ref_word[j];
      MatchStage st;
      if (rw == w) {
        if (exact_left_[w] == 0) return;
        st = MatchStage::Exact;
        --exact_left_[w];
        ++stem_avail_[s];
      } else if (in_.ref_stem[j] == s) {
        // The reference copy must be a leftover of its own word.
        if (stem_left_[s] == 0 || ref_free_[rw] - 1 < exact_left_[rw]) return;
        st = MatchStage::Stem;
        --stem_left_[s];
      } else {
        return;
      }
      ref_used_[j] = true;
      --ref_free_[rw];
      match_[i] = j;
      stage_[i] = st;
      if (feasible(w, s)) {
        const bool extends = prev_ref != kNone && j == prev_ref + 1;
        dfs(i + 1, j, chunks + (extends ? 0 : 1));
      }
      match_[i] = kNone;
      ++ref_free_[rw];
      ref_used_[j] = false;
      if (st == MatchStage::Exact) {
        ++exact_left_[w];
        --stem_avail_[s];
      } else {
        ++stem_left_[s];
      }
    };
    // Contiguous continuation first so the bound tightens early.
    if (prev_ref != kNone && prev_ref + 1 < in_.ref_word.size()) try_ref(prev_ref + 1);
    for (std::size_t j = 0; j < in_.ref_word.size(); ++j) {
      if (prev_ref != kNone && j == prev_ref + 1) continue;
      try_ref(j);
    }
    if (feasible(w, s)) dfs(i + 1, kNone, chunks);

    ++cand_left_[w];
    ++stem_avail_[s];
  }
};

// Greedy left-to-right pass for one stage. eligible(i, j) says whether the
// pair is allowed in this stage; quota is keyed by key(i).
template <typename Eligible, typename Key>
void greedy_stage(std::size_t nc, std::size_t nr, std::vector<std::size_t>& match,
                  std::vector<MatchStage>& stage, std::vector<bool>& ref_used,
                  std::vector<int>& quota, Eligible eligible, Key key, MatchStage st) {
  std::size_t prev_ref = kNone;
  for (std::size_t i = 0; i < nc; ++i) {
    if (match[i] != kNone) {
      prev_ref = match[i];
      continue;
    }
    const int k = key(i);
    if (quota[k] == 0) {
      prev_ref = kNone;
      continue;
    }
    std::size_t chosen = kNone;
    if (prev_ref != kNone && prev_ref + 1 < nr && !ref_used[prev_ref + 1] &&
        eligible(i, prev_ref + 1)) {
      chosen = prev_ref + 1;
    } else {
      // Otherwise take the free reference position that starts the longest run.
      std::size_t best_run = 0;
      for (std::size_t j = 0; j < nr; ++j) {
        if (ref_used[j] || !eligible(i, j)) continue;
        std::size_t run = 1;
        while (i + run < nc && j + run < nr && match[i + run] == kNone && !ref_used[j + run] &&
               eligible(i + run, j + run)) {
          ++run;
        }
        if (run > best_run) {
          best_run = run;
          chosen = j;
        }
      }
    }
    if (chosen == kNone) {
      prev_ref = kNone;
      continue;
    }
    --quota[k];
    match[i] = chosen;
    stage[i] = st;
    ref_used[chosen] = true;
    prev_ref = chosen;
  }
}

std::vector<MatchedPair> greedy_align(const Interned& in, const Quotas& q) {
  const std::size_t nc = in.cand_word.size();
  const std::size_t nr = in.ref_word.size();
  std::vector<std::size_t> match(nc, kNone);
  std::vector<MatchStage> stage(nc, MatchStage::Exact);
  std::vector<bool> ref_used(nr, false);
  std::vector<int> exact = q.exact;
  greedy_stage(
      nc, nr, match, stage, ref_used, exact,
      [&](std::size_t i, std::size_t j) { return in.cand_word[i] == in.ref_word[j]; },
      [&](std::size_t i) { return in.cand_word[i]; }, MatchStage::Exact);
  std::vector<int> stems = q.stem;
  greedy_stage(
      nc, nr, match, stage, ref_used, stems,
      [&](std::size_t i, std::size_t j) {
        return in.cand_word[i] != in.ref_word[j] && in.cand_stem[i] == in.ref_stem[j];
      },
      [&](std::size_t i) { return in.cand_stem[i]; }, MatchStage::Stem);
  std::vector<MatchedPair> pairs;
  for (std::size_t i = 0; i < nc; ++i) {
    if (match[i] != kNone) pairs.push_back({i, match[i], stage[i]});
  }
  return pairs;
}

}  // namespace

std::size_t count_chunks(const std::vector<MatchedPair>& pairs) {
  std::size_t chunks = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const bool continues = k > 0 && pairs[k].candidate == pairs[k - 1].candidate + 1 &&
                           pairs[k].reference == pairs[k - 1].reference + 1;
    if (!continues) ++chunks;
  }
  return chunks;
}

Alignment align(const text::TokenSeq& candidate, const text::TokenSeq& reference,
                const AlignOptions& options) {
  Alignment out;
  if (candidate.empty() || reference.empty()) return out;
  const Interned in = intern(candidate, reference);
  const Quotas q = compute_quotas(in);
  if (q.alignment_count <= options.exact_search_limit) {
    out.pairs = ExactSearch(in, q).run();
  } else {
    out.pairs = greedy_align(in, q);
  }
  out.chunks = count_chunks(out.pairs);
  return out;
}

MeteorStats stats_from_alignment(const Alignment& alignment, std::size_t candidate_length,
                                 std::size_t reference_length) {
  MeteorStats s;
  s.matches = alignment.matches();
  s.chunks = alignment.chunks;
  if (s.matches == 0 || candidate_length == 0 || reference_length == 0) {
    s.chunks = 0;
    return s;
  }
  const double m = static_cast<double>(s.matches);
  s.precision = m / static_cast<double>(candidate_length);
  s.recall = m / static_cast<double>(reference_length);
  s.fmean = 10.0 * s.precision * s.recall / (s.recall + 9.0 * s.precision);
  s.penalty = 0.5 * std::pow(static_cast<double>(s.chunks) / m, 3.0);
  s.score = s.fmean * (1.0 - s.penalty);
  return s;
}

MeteorStats meteor_score(const text::TokenSeq& review, const text::TokenSeq& manuscript,
                         const AlignOptions& options) {
  return stats_from_alignment(align(review, manuscript, options), review.size(), manuscript.size());
}

}  // namespace hprr::meteor
