#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "contralign/corpus.hpp"
#include "contralign/features.hpp"
#include "contralign/noise.hpp"
#include "contralign/search.hpp"

namespace contralign {

/// Where the posterior expectations in the gradient come from.
enum class ExpectationMode {
  kTopN,   // softmax over the beam-search top-n list
  kExact,  // full enumeration (short sentences only)
};

/// Starting point of SGD.
enum class WeightInit {
  kZero,     // theta = 0
  kLexical,  // theta = 0 except trans_prob = 1 and link_count = init_link_bias
};

struct TrainConfig {
  int n = 1;
  int beam = kDefaultBeamSize;
  double learning_rate = 0.05;
  int epochs = 5;
  double l2 = 0.0;
  std::uint64_t seed = 0;
  NoiseSpec noise;
  /// Draw a fresh noisy corpus every epoch instead of freezing one.
  bool resample_noise = false;
  WeightInit init = WeightInit::kLexical;
  double init_link_bias = 3.0;
  /// Features with mask 0 stay at their initial weight.
  FeatureVector active = FeatureVector::Ones();
  ExpectationMode mode = ExpectationMode::kTopN;
  /// Probe pairs larger than this (observed or noisy side) are skipped
  /// when computing the exact probe objective.
  int probe_max_cells = 12;

  void validate() const;
};

/// Mask with only features [0, kNumLocalFeatures) active.
FeatureVector local_feature_mask();

WeightVector initial_weights(const TrainConfig& config);

/// Softmax-weighted mean of the members' feature vectors (top-n sampling
/// estimate of the posterior expectation).
FeatureVector topn_expectation(const TopN& top);

/// E[phi | observed] - E[phi | noisy] under the configured expectation mode.
FeatureVector pair_gradient(const PairContext& observed, const PairContext& noisy,
                            const WeightVector& weights, const TrainConfig& config);
FeatureVector pair_gradient(const SentencePair& observed, const SentencePair& noisy,
                            const WeightVector& weights, const TTable& ttable,
                            const TrainConfig& config);

/// sum_i log sum_y exp(theta . phi(x_i, y)) - log sum_y exp(theta . phi(x~_i, y)),
/// by full enumeration.
double exact_objective(const Corpus& observed, const Corpus& noisy, const WeightVector& weights,
                       const TTable& ttable);

struct EpochStats {
  int epoch = 0;  // 0 is the initial state before any update
  std::size_t updates = 0;
  double mean_gradient_l1 = 0.0;
  std::optional<double> probe_objective;  // mean exact J per probe pair
  std::optional<double> probe_aer;
};

struct TrainResult {
  WeightVector weights = WeightVector::Zero();
  std::vector<EpochStats> log;
};

/// Per-example contrastive SGD:
///   theta <- theta + eta_t * (gradient - l2 * theta),  eta_t = eta_0 / (1 + t)
/// with t the 0-based epoch. `probe` (optional) is a held-out corpus used
/// only for the per-epoch log; its gold alignments drive probe AER.
TrainResult train(const Corpus& corpus, const TTable& ttable, const TrainConfig& config,
                  const Corpus* probe = nullptr);

/// Viterbi alignments of every pair.
std::vector<Alignment> align_corpus(const Corpus& corpus, const TTable& ttable,
                                    const WeightVector& weights, int beam_size);

/// CSV: epoch,updates,mean_gradient_l1,probe_objective,probe_aer
/// (empty fields when a probe quantity is unavailable).
void write_training_log(const std::vector<EpochStats>& log, std::ostream& out);

/// "index name value" per line.
void write_weights(const WeightVector& weights, std::ostream& out);
void save_weights(const WeightVector& weights, const std::filesystem::path& path);
WeightVector read_weights(std::istream& in);
WeightVector load_weights(const std::filesystem::path& path);

}  // namespace contralign
