#include "contralign/gibbs.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "contralign/error.hpp"
#include "contralign/numeric.hpp"

namespace contralign {

FeatureVector gibbs_expectation(const PairContext& context, const WeightVector& weights,
                                int sweeps, int burn_in, std::uint64_t seed) {
  if (sweeps < 1) throw Error("Gibbs sampling needs at least one sweep");
  if (burn_in < 0) throw Error("burn-in must be non-negative");
  const int l = context.source_length();
  const int m = context.target_length();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  AlignStats stats(context);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < m; ++j) {
      if (uniform(rng) < 0.5) add_link(context, stats, {i, j});
    }
  }

  std::vector<int> order(static_cast<std::size_t>(l) * m);
  std::iota(order.begin(), order.end(), 0);
  FeatureVector sum = FeatureVector::Zero();
  for (int sweep = 0; sweep < burn_in + sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int cell : order) {
      const Link link{cell / m, cell % m};
      if (stats.contains(link)) remove_link(context, stats, link);
      const FeatureVector delta = delta_add(context, stats, link);
      const double on = sigmoid(score(weights, delta));
      if (uniform(rng) < on) apply_add(stats, link, delta);
    }
    if (sweep >= burn_in) sum += stats.features();
  }
  return sum / sweeps;
}

FeatureVector gibbs_expectation(const SentencePair& pair, const WeightVector& weights,
                                const TTable& ttable, int sweeps, int burn_in,
                                std::uint64_t seed) {
  return gibbs_expectation(PairContext(pair, ttable), weights, sweeps, burn_in, seed);
}

}  // namespace contralign
