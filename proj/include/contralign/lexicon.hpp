#pragma once

#include <vector>

#include "contralign/corpus.hpp"

namespace contralign {

/// Which side conditions the lexical distribution.
///   kForward:  t(target | source)
///   kBackward: t(source | target)
enum class Direction { kForward, kBackward };

struct Model1Result {
  LexicalTable table;
  /// log_likelihood[k] is the corpus log-likelihood after k EM iterations
  /// (index 0 is the uniform initialization).
  std::vector<double> log_likelihood;
};

/// Probability floor applied after every M-step.
inline constexpr double kModel1Floor = 1e-12;

/// IBM Model 1 EM without a NULL word, initialized uniformly over
/// co-occurring word pairs.
Model1Result train_model1(const Corpus& corpus, int iterations, Direction direction);

/// Both directions of Model 1.
TTable train_ttable(const Corpus& corpus, int iterations);

}  // namespace contralign
