#pragma once

#include <cstdint>

#include "contralign/features.hpp"

namespace contralign {

/// Gibbs estimate of E[phi | x; theta]. Each link is a binary variable
/// resampled from P(link | rest), a sigmoid of the score change of
/// switching it on. The chain starts from a uniformly random alignment;
/// a sweep visits all l*m links in a freshly shuffled order and the
/// sweep-end states after `burn_in` sweeps are averaged.
FeatureVector gibbs_expectation(const PairContext& context, const WeightVector& weights,
                                int sweeps, int burn_in, std::uint64_t seed);
FeatureVector gibbs_expectation(const SentencePair& pair, const WeightVector& weights,
                                const TTable& ttable, int sweeps, int burn_in,
                                std::uint64_t seed);

}  // namespace contralign
