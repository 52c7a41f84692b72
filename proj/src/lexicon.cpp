#include "contralign/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "contralign/error.hpp"

namespace contralign {

namespace {

struct Vocab {
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> words;

  int intern(const std::string& w) {
    auto [it, inserted] = ids.emplace(w, static_cast<int>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  }
};

// A sentence pair projected onto integer ids, with every (given, word)
// cell resolved to a parameter slot.
struct EncodedPair {
  int given_length = 0;
  int word_length = 0;
  std::vector<int> slots;  // word-major: slots[w * given_length + g]
};

}  // namespace

Model1Result train_model1(const Corpus& corpus, int iterations, Direction direction) {
  if (corpus.empty()) throw Error("cannot train Model 1 on an empty corpus");
  if (iterations < 1) throw Error("Model 1 needs at least one iteration");

  Vocab given_vocab;
  Vocab word_vocab;
  // Slot per co-occurring (given, word) id pair.
  std::unordered_map<std::uint64_t, int> slot_of;
  std::vector<int> slot_given;
  std::vector<int> slot_word;
  std::vector<EncodedPair> encoded;
  encoded.reserve(corpus.size());

  for (const auto& pair : corpus.pairs) {
    const Sentence& given = direction == Direction::kForward ? pair.source : pair.target;
    const Sentence& words = direction == Direction::kForward ? pair.target : pair.source;
    EncodedPair ep;
    ep.given_length = static_cast<int>(given.size());
    ep.word_length = static_cast<int>(words.size());
    ep.slots.reserve(given.size() * words.size());
    std::vector<int> given_ids;
    for (const auto& g : given) given_ids.push_back(given_vocab.intern(g));
    for (const auto& w : words) {
      const int wid = word_vocab.intern(w);
      for (int gid : given_ids) {
        const std::uint64_t key = (static_cast<std::uint64_t>(gid) << 32) | static_cast<unsigned>(wid);
        auto [it, inserted] = slot_of.emplace(key, static_cast<int>(slot_given.size()));
        if (inserted) {
          slot_given.push_back(gid);
          slot_word.push_back(wid);
        }
        ep.slots.push_back(it->second);
      }
    }
    encoded.push_back(std::move(ep));
  }

  const std::size_t num_slots = slot_given.size();
  std::vector<int> cooccur(given_vocab.words.size(), 0);
  for (int g : slot_given) ++cooccur[g];
  std::vector<double> prob(num_slots);
  for (std::size_t s = 0; s < num_slots; ++s) prob[s] = 1.0 / cooccur[slot_given[s]];

  // One pass over the corpus: returns the log-likelihood of the current
  // table and, when `counts` is non-null, accumulates expected counts.
  auto expectation = [&](std::vector<double>* counts) {
    double ll = 0.0;
    for (const auto& ep : encoded) {
      const int gl = ep.given_length;
      for (int w = 0; w < ep.word_length; ++w) {
        const int* row = &ep.slots[static_cast<std::size_t>(w) * gl];
        double denom = 0.0;
        for (int g = 0; g < gl; ++g) denom += prob[row[g]];
        ll += std::log(denom / gl);
        if (counts) {
          for (int g = 0; g < gl; ++g) (*counts)[row[g]] += prob[row[g]] / denom;
        }
      }
    }
    return ll;
  };

  Model1Result result;
  result.log_likelihood.reserve(iterations + 1);
  std::vector<double> counts(num_slots);
  std::vector<double> totals(given_vocab.words.size());
  for (int it = 0; it < iterations; ++it) {
    std::fill(counts.begin(), counts.end(), 0.0);
    result.log_likelihood.push_back(expectation(&counts));
    std::fill(totals.begin(), totals.end(), 0.0);
    for (std::size_t s = 0; s < num_slots; ++s) totals[slot_given[s]] += counts[s];
    for (std::size_t s = 0; s < num_slots; ++s) {
      prob[s] = std::max(counts[s] / totals[slot_given[s]], kModel1Floor);
    }
  }
  result.log_likelihood.push_back(expectation(nullptr));

  for (std::size_t s = 0; s < num_slots; ++s) {
    result.table[given_vocab.words[slot_given[s]]][word_vocab.words[slot_word[s]]] = prob[s];
  }
  return result;
}

TTable train_ttable(const Corpus& corpus, int iterations) {
  TTable table;
  table.forward = train_model1(corpus, iterations, Direction::kForward).table;
  table.backward = train_model1(corpus, iterations, Direction::kBackward).table;
  return table;
}

}  // namespace contralign
