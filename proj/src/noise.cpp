#include "contralign/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "contralign/error.hpp"
#include "contralign/random.hpp"

namespace contralign {

NoiseStrategy parse_noise_strategy(std::string_view name) {
  if (name == "shuffle") return NoiseStrategy::kShuffle;
  if (name == "delete") return NoiseStrategy::kDelete;
  if (name == "insert") return NoiseStrategy::kInsert;
  if (name == "replace") return NoiseStrategy::kReplace;
  if (name == "mixed") return NoiseStrategy::kMixed;
  throw Error("unknown noise strategy '" + std::string(name) + "'");
}

std::string_view to_string(NoiseStrategy strategy) {
  switch (strategy) {
    case NoiseStrategy::kShuffle: return "shuffle";
    case NoiseStrategy::kDelete: return "delete";
    case NoiseStrategy::kInsert: return "insert";
    case NoiseStrategy::kReplace: return "replace";
    case NoiseStrategy::kMixed: return "mixed";
  }
  return "unknown";
}

Vocabulary corpus_vocabulary(const Corpus& corpus) {
  std::set<std::string> source;
  std::set<std::string> target;
  for (const auto& pair : corpus.pairs) {
    source.insert(pair.source.begin(), pair.source.end());
    target.insert(pair.target.begin(), pair.target.end());
  }
  return {{source.begin(), source.end()}, {target.begin(), target.end()}};
}

namespace {

using Rng = std::mt19937_64;

std::size_t affected(double rate, std::size_t length) {
  // Guard against 0.1 * 30 = 3.0000000000000004 rounding up to 4.
  return static_cast<std::size_t>(std::ceil(rate * static_cast<double>(length) - 1e-9));
}

std::size_t uniform_index(Rng& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

// `count` distinct positions out of [0, length), ascending.
std::vector<std::size_t> pick_positions(Rng& rng, std::size_t length, std::size_t count) {
  std::vector<std::size_t> all(length);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(count, length));
  std::sort(all.begin(), all.end());
  return all;
}

Sentence corrupt(const Sentence& side, NoiseStrategy strategy, double rate,
                 const std::vector<std::string>& vocab, Rng& rng) {
  Sentence out = side;
  const std::size_t k = affected(rate, side.size());
  switch (strategy) {
    case NoiseStrategy::kShuffle:
      std::shuffle(out.begin(), out.end(), rng);
      break;
    case NoiseStrategy::kDelete: {
      const std::size_t removable = side.size() > 1 ? side.size() - 1 : 0;
      const auto drop = pick_positions(rng, side.size(), std::min(k, removable));
      for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(*it));
      }
      break;
    }
    case NoiseStrategy::kInsert:
      for (std::size_t n = 0; n < k; ++n) {
        const std::size_t pos = uniform_index(rng, out.size() + 1);
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), vocab[uniform_index(rng, vocab.size())]);
      }
      break;
    case NoiseStrategy::kReplace:
      for (std::size_t pos : pick_positions(rng, side.size(), k)) {
        out[pos] = vocab[uniform_index(rng, vocab.size())];
      }
      break;
    case NoiseStrategy::kMixed: {
      constexpr NoiseStrategy kChoices[] = {NoiseStrategy::kShuffle, NoiseStrategy::kDelete,
                                            NoiseStrategy::kInsert, NoiseStrategy::kReplace};
      return corrupt(side, kChoices[uniform_index(rng, 4)], rate, vocab, rng);
    }
  }
  return out;
}

}  // namespace

SentencePair make_noise(const SentencePair& pair, const NoiseSpec& spec,
                        const Vocabulary& vocabulary) {
  if (!(spec.rate > 0.0 && spec.rate <= 1.0)) {
    throw Error("noise rate must lie in (0, 1], got " + std::to_string(spec.rate));
  }
  const bool needs_vocab = spec.strategy == NoiseStrategy::kInsert ||
                           spec.strategy == NoiseStrategy::kReplace ||
                           spec.strategy == NoiseStrategy::kMixed;
  if (needs_vocab && (vocabulary.source.empty() || vocabulary.target.empty())) {
    throw Error("noise strategy '" + std::string(to_string(spec.strategy)) +
                "' needs a non-empty vocabulary on both sides");
  }
  Rng rng(mix_seed(spec.seed ^ pair.id));
  SentencePair noisy;
  noisy.id = pair.id;
  noisy.source = corrupt(pair.source, spec.strategy, spec.rate, vocabulary.source, rng);
  noisy.target = corrupt(pair.target, spec.strategy, spec.rate, vocabulary.target, rng);
  return noisy;
}

Corpus make_noisy_corpus(const Corpus& corpus, const NoiseSpec& spec) {
  const Vocabulary vocabulary = corpus_vocabulary(corpus);
  Corpus noisy;
  noisy.pairs.reserve(corpus.size());
  for (const auto& pair : corpus.pairs) noisy.pairs.push_back(make_noise(pair, spec, vocabulary));
  return noisy;
}

}  // namespace contralign
