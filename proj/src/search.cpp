#include "contralign/search.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "contralign/error.hpp"

namespace contralign {

bool ranks_before(const ScoredAlignment& a, const ScoredAlignment& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.alignment < b.alignment;
}

TopN::TopN(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error("top-n capacity must be positive");
  items_.reserve(capacity + 1);
}

bool TopN::may_admit(double score) const {
  if (!full()) return true;
  const double worst = items_.back().score;
  return score >= worst - 1e-9 * std::max(1.0, std::abs(worst));
}

bool TopN::offer(ScoredAlignment item) {
  for (const auto& existing : items_) {
    if (existing.alignment == item.alignment) return false;
  }
  auto pos = std::lower_bound(items_.begin(), items_.end(), item, ranks_before);
  if (full() && pos == items_.end()) return false;
  items_.insert(pos, std::move(item));
  if (items_.size() > capacity_) items_.pop_back();
  return true;
}

namespace {

struct BeamState {
  AlignStats stats;
  Alignment alignment;
  double score;
};

struct Candidate {
  std::size_t parent;
  Link link;
  FeatureVector delta;
  double score;
  Alignment alignment;
};

void offer_canonical(TopN& top, const PairContext& context, const WeightVector& weights,
                     Alignment alignment) {
  // Recompute from scratch so the stored score does not depend on the
  // order in which links were added.
  FeatureVector phi = extract_features(context, alignment);
  const double s = score(weights, phi);
  top.offer({std::move(alignment), s, phi});
}

}  // namespace

TopN beam_search(const PairContext& context, const WeightVector& weights, int beam_size,
                 int n) {
  if (beam_size < 1) throw Error("beam size must be positive");
  if (n < 1) throw Error("top-n size must be positive");
  const int l = context.source_length();
  const int m = context.target_length();

  TopN top(static_cast<std::size_t>(n));
  top.offer({Alignment{}, 0.0, FeatureVector::Zero()});

  std::vector<BeamState> beam;
  beam.push_back({AlignStats(context), Alignment{}, 0.0});

  std::vector<Candidate> pool;
  std::unordered_map<Alignment, std::size_t, AlignmentHash> seen;
  while (!beam.empty()) {
    pool.clear();
    seen.clear();
    for (std::size_t p = 0; p < beam.size(); ++p) {
      const BeamState& state = beam[p];
      for (int i = 0; i < l; ++i) {
        for (int j = 0; j < m; ++j) {
          const Link link{i, j};
          if (state.stats.contains(link)) continue;
          FeatureVector delta = delta_add(context, state.stats, link);
          const double gain = score(weights, delta);
          const double child_score = state.score + gain;
          if (top.may_admit(child_score)) {
            offer_canonical(top, context, weights, state.alignment.with(link));
          }
          if (gain > 0.0) {
            Alignment child = state.alignment.with(link);
            if (seen.emplace(child, pool.size()).second) {
              pool.push_back({p, link, delta, child_score, std::move(child)});
            }
          }
        }
      }
    }

    const std::size_t keep = std::min<std::size_t>(pool.size(), beam_size);
    auto order = [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.alignment < b.alignment;
    };
    std::partial_sort(pool.begin(), pool.begin() + keep, pool.end(), order);

    std::vector<BeamState> next;
    next.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) {
      Candidate& c = pool[k];
      BeamState child{beam[c.parent].stats, std::move(c.alignment), c.score};
      apply_add(child.stats, c.link, c.delta);
      next.push_back(std::move(child));
    }
    beam = std::move(next);
  }
  return top;
}

TopN beam_search(const SentencePair& pair, const WeightVector& weights, const TTable& ttable,
                 int beam_size, int n) {
  return beam_search(PairContext(pair, ttable), weights, beam_size, n);
}

ScoredAlignment viterbi(const PairContext& context, const WeightVector& weights,
                        int beam_size) {
  return beam_search(context, weights, beam_size, 1)[0];
}

ScoredAlignment viterbi(const SentencePair& pair, const WeightVector& weights,
                        const TTable& ttable, int beam_size) {
  return viterbi(PairContext(pair, ttable), weights, beam_size);
}

}  // namespace contralign
