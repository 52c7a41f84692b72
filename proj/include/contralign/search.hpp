#pragma once

#include <cstddef>
#include <vector>

#include "contralign/features.hpp"

namespace contralign {

struct ScoredAlignment {
  Alignment alignment;
  double score = 0.0;
  FeatureVector features = FeatureVector::Zero();
};

/// Strict ranking: higher score first, ties broken by the canonical link
/// list in ascending order.
bool ranks_before(const ScoredAlignment& a, const ScoredAlignment& b);

/// Bounded, deduplicated, ranked list of the best alignments seen so far.
class TopN {
 public:
  explicit TopN(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool full() const { return items_.size() >= capacity_; }
  const std::vector<ScoredAlignment>& items() const { return items_; }
  const ScoredAlignment& operator[](std::size_t k) const { return items_[k]; }

  /// Cheap pre-filter: false only if an item with this score can
  /// certainly not enter. Scores within round-off of the current worst
  /// pass so the exact tie-break can decide.
  bool may_admit(double score) const;

  /// Inserts unless the alignment is already present or ranks below a
  /// full list. Returns whether the item was inserted.
  bool offer(ScoredAlignment item);

 private:
  std::size_t capacity_;
  std::vector<ScoredAlignment> items_;
};

inline constexpr int kDefaultBeamSize = 8;

/// Greedy link-addition beam search. Starting from the empty alignment,
/// every beam state is expanded by each absent link; children whose
/// score strictly increases compete for the next beam (top `beam_size`,
/// deduplicated by link set). Every state scored along the way is offered
/// to the returned top-n list.
TopN beam_search(const PairContext& context, const WeightVector& weights, int beam_size,
                 int n);
TopN beam_search(const SentencePair& pair, const WeightVector& weights, const TTable& ttable,
                 int beam_size, int n);

/// Best alignment found by beam_search with n = 1.
ScoredAlignment viterbi(const PairContext& context, const WeightVector& weights,
                        int beam_size);
ScoredAlignment viterbi(const SentencePair& pair, const WeightVector& weights,
                        const TTable& ttable, int beam_size);

}  // namespace contralign
