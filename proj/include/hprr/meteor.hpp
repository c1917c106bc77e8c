#pragma once

#include <cstddef>
#include <vector>

#include "hprr/textproc.hpp"

namespace hprr::meteor {

enum class MatchStage { Exact, Stem };

struct MatchedPair {
  std::size_t candidate = 0;
  std::size_t reference = 0;
  MatchStage stage = MatchStage::Exact;
  bool operator==(const MatchedPair&) const = default;
};

/// Unigram alignment, pairs sorted by candidate index.
struct Alignment {
  std::vector<MatchedPair> pairs;
  std::size_t chunks = 0;

  std::size_t matches() const noexcept { return pairs.size(); }
};

struct MeteorStats {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  double score = 0.0;
};

struct AlignOptions {
  // Exhaustive chunk minimisation is used while the number of maximum-cardinality
  // alignments stays at or below this bound; greedy contiguity extension otherwise.
  double exact_search_limit = 250000.0;
};

/// Number of chunks in a set of pairs sorted by candidate index.
std::size_t count_chunks(const std::vector<MatchedPair>& pairs);

/// Two-stage (exact surface, then Porter stem) maximum-cardinality alignment
/// that prefers fewer chunks among equally sized matchings.
Alignment align(const text::TokenSeq& candidate, const text::TokenSeq& reference,
                const AlignOptions& options = {});

/// Stats from a finished alignment and the two sequence lengths.
MeteorStats stats_from_alignment(const Alignment& alignment, std::size_t candidate_length,
                                 std::size_t reference_length);

/// METEOR with fmean = 10PR/(R+9P), penalty = 0.5 (chunks/m)^3.
/// The review is the candidate and the manuscript the reference.
MeteorStats meteor_score(const text::TokenSeq& review, const text::TokenSeq& manuscript,
                         const AlignOptions& options = {});

}  // namespace hprr::meteor
