#include "contralign/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "contralign/error.hpp"
#include "contralign/numeric.hpp"

namespace contralign {

namespace {

void check_guard(int l, int m) {
  if (l * m > kMaxEnumerationCells) {
    throw Error("refusing to enumerate a " + std::to_string(l) + "x" + std::to_string(m) +
                " pair: l*m = " + std::to_string(l * m) + " exceeds the bound of " +
                std::to_string(kMaxEnumerationCells));
  }
}

Alignment decode(std::int64_t index, int m) {
  std::vector<Link> links;
  for (int b = 0; index >> b; ++b) {
    if ((index >> b) & 1) links.push_back({b / m, b % m});
  }
  return Alignment(std::move(links));
}

}  // namespace

EnumeratedSpace::EnumeratedSpace(const SentencePair& pair, const TTable& ttable)
    : EnumeratedSpace(PairContext(pair, ttable),
                      pair.cells() <= kDefaultCacheCells) {}

EnumeratedSpace::EnumeratedSpace(PairContext context, bool cache)
    : context_(std::move(context)) {
  check_guard(context_.source_length(), context_.target_length());
  if (cache) {
    for (std::int64_t first = 0; first < size(); first += kBlockRows) {
      cached_.push_back(make_block(first, std::min(kBlockRows, size() - first)));
    }
  }
}

Alignment EnumeratedSpace::alignment_at(std::int64_t index) const {
  return decode(index, context_.target_length());
}

FeatureBlock EnumeratedSpace::make_block(std::int64_t first, std::int64_t rows) const {
  FeatureBlock block(rows, kNumFeatures);
  for (std::int64_t r = 0; r < rows; ++r) {
    block.row(r) = extract_features(context_, alignment_at(first + r)).transpose();
  }
  return block;
}

void EnumeratedSpace::for_each_block(
    const std::function<void(std::int64_t, const FeatureBlock&)>& fn) const {
  if (!cached_.empty()) {
    for (std::size_t b = 0; b < cached_.size(); ++b) fn(std::int64_t(b) * kBlockRows, cached_[b]);
    return;
  }
  for (std::int64_t first = 0; first < size(); first += kBlockRows) {
    fn(first, make_block(first, std::min(kBlockRows, size() - first)));
  }
}

void enumerate(const SentencePair& pair, const std::function<void(const Alignment&)>& visit) {
  check_guard(pair.source_length(), pair.target_length());
  const std::int64_t total = std::int64_t{1} << pair.cells();
  for (std::int64_t index = 0; index < total; ++index) {
    visit(decode(index, pair.target_length()));
  }
}

double log_partition(const EnumeratedSpace& space, const WeightVector& weights) {
  LogSumExpAccumulator<double> acc;
  space.for_each_block([&](std::int64_t, const FeatureBlock& block) {
    const Eigen::VectorXd scores = block * weights;
    const double block_lse = log_sum_exp(scores);
    acc.add(block_lse);
  });
  return acc.value();
}

Eigen::VectorXd posterior(const EnumeratedSpace& space, const WeightVector& weights) {
  const double log_z = log_partition(space, weights);
  Eigen::VectorXd probs(space.size());
  space.for_each_block([&](std::int64_t first, const FeatureBlock& block) {
    probs.segment(first, block.rows()) = ((block * weights).array() - log_z).exp().matrix();
  });
  return probs;
}

Eigen::VectorXd posterior(const SentencePair& pair, const WeightVector& weights,
                          const TTable& ttable) {
  return posterior(EnumeratedSpace(pair, ttable), weights);
}

FeatureVector exact_expectation(const EnumeratedSpace& space, const WeightVector& weights) {
  // Running max-shifted sums, rescaled whenever a block raises the max.
  double max = -std::numeric_limits<double>::infinity();
  double mass = 0.0;
  FeatureVector moment = FeatureVector::Zero();
  space.for_each_block([&](std::int64_t, const FeatureBlock& block) {
    const Eigen::VectorXd scores = block * weights;
    const double block_max = scores.maxCoeff();
    if (block_max > max) {
      const double rescale = std::exp(max - block_max);
      mass *= rescale;
      moment *= rescale;
      max = block_max;
    }
    const Eigen::VectorXd w = (scores.array() - max).exp().matrix();
    mass += w.sum();
    moment.noalias() += block.transpose() * w;
  });
  return moment / mass;
}

FeatureVector exact_expectation(const SentencePair& pair, const WeightVector& weights,
                                const TTable& ttable) {
  return exact_expectation(EnumeratedSpace(pair, ttable), weights);
}

TopN exact_topn(const EnumeratedSpace& space, const WeightVector& weights, int n) {
  if (n < 1) throw Error("top-n size must be positive");
  TopN top(static_cast<std::size_t>(n));
  space.for_each_block([&](std::int64_t first, const FeatureBlock& block) {
    const Eigen::VectorXd scores = block * weights;
    for (std::int64_t r = 0; r < block.rows(); ++r) {
      if (!top.may_admit(scores[r])) continue;
      const FeatureVector phi = block.row(r).transpose();
      top.offer({space.alignment_at(first + r), score(weights, phi), phi});
    }
  });
  return top;
}

TopN exact_topn(const SentencePair& pair, const WeightVector& weights, const TTable& ttable,
                int n) {
  return exact_topn(EnumeratedSpace(pair, ttable), weights, n);
}

std::vector<double> mass_curve(const EnumeratedSpace& space, const WeightVector& weights,
                               int k_max) {
  if (k_max < 1) throw Error("k_max must be positive");
  const auto keep = static_cast<std::size_t>(std::min<std::int64_t>(k_max, space.size()));
  // Min-heap of the `keep` largest scores.
  std::priority_queue<double, std::vector<double>, std::greater<>> best;
  LogSumExpAccumulator<double> log_z;
  space.for_each_block([&](std::int64_t, const FeatureBlock& block) {
    const Eigen::VectorXd scores = block * weights;
    log_z.add(log_sum_exp(scores));
    for (double s : scores) {
      if (best.size() < keep) {
        best.push(s);
      } else if (s > best.top()) {
        best.pop();
        best.push(s);
      }
    }
  });
  std::vector<double> top;
  top.reserve(keep);
  while (!best.empty()) {
    top.push_back(best.top());
    best.pop();
  }
  std::reverse(top.begin(), top.end());

  const double z = log_z.value();
  std::vector<double> curve;
  curve.reserve(k_max);
  double cumulative = 0.0;
  for (double s : top) {
    cumulative += std::exp(s - z);
    curve.push_back(std::min(cumulative, 1.0));
  }
  curve.resize(static_cast<std::size_t>(k_max), curve.back());
  return curve;
}

std::vector<double> mass_curve(const SentencePair& pair, const WeightVector& weights,
                               const TTable& ttable, int k_max) {
  return mass_curve(EnumeratedSpace(pair, ttable), weights, k_max);
}

}  // namespace contralign
