#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "contralign/alignment.hpp"
#include "contralign/corpus.hpp"

namespace contralign {

inline constexpr int kNumFeatures = 16;
/// Features [0, kNumLocalFeatures) form the "local" group.
inline constexpr int kNumLocalFeatures = 5;
/// Smoothing inside the translation-probability logarithm.
inline constexpr double kProbSmoothing = 1e-9;

template <typename Scalar>
using FeatureVectorT = Eigen::Matrix<Scalar, kNumFeatures, 1>;
template <typename Scalar>
using WeightVectorT = Eigen::Matrix<Scalar, kNumFeatures, 1>;

using FeatureVector = FeatureVectorT<double>;
using WeightVector = WeightVectorT<double>;

enum FeatureIndex : int {
  kTransProb = 0,
  kRelativePosition = 1,
  kLinkCount = 2,
  kMonotoneNeighbors = 3,
  kSwapNeighbors = 4,
  kCrossCount = 5,
  kSourceLinked = 6,
  kTargetLinked = 7,
  kSourceSiblingDistance = 8,
  kTargetSiblingDistance = 9,
  kSourceMaxFertility = 10,
  kTargetMaxFertility = 11,
  kOneToOne = 12,
  kOneToMany = 13,
  kManyToOne = 14,
  kManyToMany = 15,
};

std::string_view feature_name(int index);

/// theta . phi, the log of the unnormalized alignment probability.
template <typename Scalar>
Scalar score(const WeightVectorT<Scalar>& weights, const FeatureVectorT<Scalar>& features) {
  return weights.dot(features);
}

/// Per-pair cache of the link-local quantities: the smoothed two-way
/// log translation probability and the relative position distance of
/// every cell of the l x m grid.
class PairContext {
 public:
  PairContext(const SentencePair& pair, const TTable& ttable);

  int source_length() const { return static_cast<int>(trans_.rows()); }
  int target_length() const { return static_cast<int>(trans_.cols()); }
  int cells() const { return static_cast<int>(trans_.size()); }
  bool in_bounds(Link link) const {
    return link.src >= 0 && link.src < source_length() && link.tgt >= 0 &&
           link.tgt < target_length();
  }

  double trans(Link link) const { return trans_(link.src, link.tgt); }
  double relpos(Link link) const { return relpos_(link.src, link.tgt); }
  const Eigen::MatrixXd& trans_matrix() const { return trans_; }

 private:
  Eigen::MatrixXd trans_;
  Eigen::MatrixXd relpos_;
};

/// Full recomputation of phi(x, y). Links are visited in canonical order,
/// so equal alignments give bitwise-equal vectors.
FeatureVector extract_features(const PairContext& context, const Alignment& alignment);
FeatureVector extract_features(const SentencePair& pair, const Alignment& alignment,
                               const TTable& ttable);

/// Incremental bookkeeping for one alignment under construction: link
/// grid, fertilities, per-word sorted link lists and the cached feature
/// vector.
class AlignStats {
 public:
  explicit AlignStats(const PairContext& context);

  int source_length() const { return source_length_; }
  int target_length() const { return target_length_; }
  std::size_t num_links() const { return links_.size(); }
  bool contains(Link link) const { return grid_[index(link)] != 0; }
  int source_fertility(int i) const { return source_fert_[i]; }
  int target_fertility(int j) const { return target_fert_[j]; }
  const FeatureVector& features() const { return features_; }
  Alignment alignment() const { return Alignment(links_); }

 private:
  friend FeatureVector delta_add(const PairContext&, const AlignStats&, Link);
  friend void apply_add(AlignStats&, Link, const FeatureVector&);
  friend void remove_link(const PairContext&, AlignStats&, Link);

  std::size_t index(Link link) const {
    return static_cast<std::size_t>(link.src) * target_length_ + link.tgt;
  }
  bool has(int i, int j) const {
    return i >= 0 && i < source_length_ && j >= 0 && j < target_length_ &&
           grid_[static_cast<std::size_t>(i) * target_length_ + j] != 0;
  }

  int source_length_;
  int target_length_;
  std::vector<char> grid_;
  std::vector<int> source_fert_;
  std::vector<int> target_fert_;
  std::vector<std::vector<int>> source_links_;  // sorted target positions per source word
  std::vector<std::vector<int>> target_links_;  // sorted source positions per target word
  std::vector<Link> links_;
  int max_source_fert_ = 0;
  int max_target_fert_ = 0;
  FeatureVector features_ = FeatureVector::Zero();
};

/// phi(y + link) - phi(y) without recomputation. Throws if the link is
/// out of bounds or already present.
FeatureVector delta_add(const PairContext& context, const AlignStats& stats, Link link);

/// Adds `link` and moves the cached vector by `delta`, which must come
/// from delta_add on the same state.
void apply_add(AlignStats& stats, Link link, const FeatureVector& delta);

/// delta_add followed by apply_add; returns the delta.
FeatureVector add_link(const PairContext& context, AlignStats& stats, Link link);

/// Removes a present link and updates the cache.
void remove_link(const PairContext& context, AlignStats& stats, Link link);

}  // namespace contralign
