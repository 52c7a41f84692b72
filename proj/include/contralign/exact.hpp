#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "contralign/features.hpp"
#include "contralign/search.hpp"

namespace contralign {

/// Largest l*m the enumeration oracle accepts (2^24 alignments).
inline constexpr int kMaxEnumerationCells = 24;

/// Rows of phi(x, y) for a contiguous range of enumeration indices.
using FeatureBlock = Eigen::Matrix<double, Eigen::Dynamic, kNumFeatures, Eigen::RowMajor>;

/// The full alignment space Y(x) of one sentence pair, in binary-counting
/// order: bit b of the index switches on link (b / m, b % m). Feature rows
/// are produced in blocks; small spaces keep them resident so repeated
/// scoring under many weight vectors is one matrix-vector product per
/// block.
class EnumeratedSpace {
 public:
  static constexpr std::int64_t kBlockRows = 4096;
  /// Spaces up to this many cells are cached by default (2^16 rows).
  static constexpr int kDefaultCacheCells = 16;

  EnumeratedSpace(const SentencePair& pair, const TTable& ttable);
  EnumeratedSpace(PairContext context, bool cache);

  const PairContext& context() const { return context_; }
  int cells() const { return context_.cells(); }
  std::int64_t size() const { return std::int64_t{1} << cells(); }
  Alignment alignment_at(std::int64_t index) const;

  /// Calls fn(first_index, block) for consecutive blocks covering Y(x).
  void for_each_block(const std::function<void(std::int64_t, const FeatureBlock&)>& fn) const;

 private:
  FeatureBlock make_block(std::int64_t first, std::int64_t rows) const;

  PairContext context_;
  std::vector<FeatureBlock> cached_;
};

/// Streams every alignment of Y(x) in enumeration order.
void enumerate(const SentencePair& pair, const std::function<void(const Alignment&)>& visit);

double log_partition(const EnumeratedSpace& space, const WeightVector& weights);

/// P(y | x; theta) for every y, indexed like the enumeration.
Eigen::VectorXd posterior(const EnumeratedSpace& space, const WeightVector& weights);
Eigen::VectorXd posterior(const SentencePair& pair, const WeightVector& weights,
                          const TTable& ttable);

FeatureVector exact_expectation(const EnumeratedSpace& space, const WeightVector& weights);
FeatureVector exact_expectation(const SentencePair& pair, const WeightVector& weights,
                                const TTable& ttable);

/// The n highest-scoring alignments, ranked like TopN.
TopN exact_topn(const EnumeratedSpace& space, const WeightVector& weights, int n);
TopN exact_topn(const SentencePair& pair, const WeightVector& weights, const TTable& ttable,
                int n);

/// Entry k-1 is the posterior mass of the k most probable alignments.
/// Entries past |Y(x)| repeat the total.
std::vector<double> mass_curve(const EnumeratedSpace& space, const WeightVector& weights,
                               int k_max);
std::vector<double> mass_curve(const SentencePair& pair, const WeightVector& weights,
                               const TTable& ttable, int k_max);

}  // namespace contralign
