#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "contralign/corpus.hpp"

namespace contralign {

enum class NoiseStrategy { kShuffle, kDelete, kInsert, kReplace, kMixed };

NoiseStrategy parse_noise_strategy(std::string_view name);
std::string_view to_string(NoiseStrategy strategy);

struct NoiseSpec {
  NoiseStrategy strategy = NoiseStrategy::kShuffle;
  /// Fraction of positions affected per side; ignored by kShuffle.
  double rate = 0.25;
  std::uint64_t seed = 0;
};

/// Sorted distinct words of each side.
struct Vocabulary {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

Vocabulary corpus_vocabulary(const Corpus& corpus);

/// Corrupts both sides of a pair. The random stream is seeded from
/// spec.seed ^ pair.id, so the result does not depend on which other
/// pairs were processed.
SentencePair make_noise(const SentencePair& pair, const NoiseSpec& spec,
                        const Vocabulary& vocabulary);

/// One noisy pair per observed pair, index aligned; vocabulary taken from
/// the corpus itself. Gold alignments are not carried over.
Corpus make_noisy_corpus(const Corpus& corpus, const NoiseSpec& spec);

}  // namespace contralign
