#include "contralign/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "contralign/error.hpp"
#include "contralign/exact.hpp"
#include "contralign/metrics.hpp"
#include "contralign/random.hpp"

namespace contralign {

void TrainConfig::validate() const {
  if (n < 1) throw Error("n must be positive");
  if (beam < 1) throw Error("beam size must be positive");
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (epochs < 1) throw Error("epochs must be positive");
  if (!(l2 >= 0.0)) throw Error("l2 must be non-negative");
  if (!(noise.rate > 0.0 && noise.rate <= 1.0)) throw Error("noise rate must lie in (0, 1]");
  if (!std::isfinite(init_link_bias)) throw Error("initial link bias must be finite");
}

FeatureVector local_feature_mask() {
  FeatureVector mask = FeatureVector::Zero();
  mask.head<kNumLocalFeatures>().setOnes();
  return mask;
}

WeightVector initial_weights(const TrainConfig& config) {
  WeightVector theta = WeightVector::Zero();
  if (config.init == WeightInit::kLexical) {
    theta[kTransProb] = 1.0;
    theta[kLinkCount] = config.init_link_bias;
  }
  return theta.cwiseProduct(config.active);
}

FeatureVector topn_expectation(const TopN& top) {
  if (top.empty()) throw Error("top-n expectation of an empty list");
  const double max = top[0].score;
  double mass = 0.0;
  FeatureVector moment = FeatureVector::Zero();
  for (const auto& item : top.items()) {
    const double w = std::exp(item.score - max);
    mass += w;
    moment += w * item.features;
  }
  return moment / mass;
}

namespace {

FeatureVector expectation(const PairContext& context, const WeightVector& weights,
                          const TrainConfig& config) {
  if (config.mode == ExpectationMode::kExact) {
    return exact_expectation(EnumeratedSpace(context, false), weights);
  }
  return topn_expectation(beam_search(context, weights, config.beam, config.n));
}

struct Probe {
  const Corpus* corpus = nullptr;
  std::vector<PairContext> contexts;
  std::vector<EnumeratedSpace> observed;
  std::vector<EnumeratedSpace> noisy;
};

Probe prepare_probe(const Corpus* corpus, const TTable& ttable, const TrainConfig& config) {
  Probe probe;
  if (!corpus) return probe;
  probe.corpus = corpus;
  for (const auto& pair : corpus->pairs) probe.contexts.emplace_back(pair, ttable);
  NoiseSpec spec = config.noise;
  spec.seed = derive_seed(config.noise.seed, "probe");
  const Corpus noisy = make_noisy_corpus(*corpus, spec);
  for (std::size_t k = 0; k < corpus->size(); ++k) {
    const auto& obs = corpus->pairs[k];
    const auto& noi = noisy.pairs[k];
    if (obs.cells() <= config.probe_max_cells && noi.cells() <= config.probe_max_cells) {
      probe.observed.emplace_back(obs, ttable);
      probe.noisy.emplace_back(noi, ttable);
    }
  }
  return probe;
}

void evaluate_probe(const Probe& probe, const WeightVector& weights, const TrainConfig& config,
                    EpochStats& stats) {
  if (!probe.corpus) return;
  if (!probe.observed.empty()) {
    double j = 0.0;
    for (std::size_t k = 0; k < probe.observed.size(); ++k) {
      j += log_partition(probe.observed[k], weights) - log_partition(probe.noisy[k], weights);
    }
    stats.probe_objective = j / static_cast<double>(probe.observed.size());
  }
  if (probe.corpus->gold) {
    std::vector<Alignment> predicted;
    predicted.reserve(probe.contexts.size());
    for (const auto& ctx : probe.contexts) {
      predicted.push_back(viterbi(ctx, weights, config.beam).alignment);
    }
    stats.probe_aer = corpus_aer(predicted, *probe.corpus->gold);
  }
}

std::vector<PairContext> contexts_of(const Corpus& corpus, const TTable& ttable) {
  std::vector<PairContext> out;
  out.reserve(corpus.size());
  for (const auto& pair : corpus.pairs) out.emplace_back(pair, ttable);
  return out;
}

}  // namespace

FeatureVector pair_gradient(const PairContext& observed, const PairContext& noisy,
                            const WeightVector& weights, const TrainConfig& config) {
  return expectation(observed, weights, config) - expectation(noisy, weights, config);
}

FeatureVector pair_gradient(const SentencePair& observed, const SentencePair& noisy,
                            const WeightVector& weights, const TTable& ttable,
                            const TrainConfig& config) {
  return pair_gradient(PairContext(observed, ttable), PairContext(noisy, ttable), weights,
                       config);
}

double exact_objective(const Corpus& observed, const Corpus& noisy, const WeightVector& weights,
                       const TTable& ttable) {
  if (observed.size() != noisy.size()) {
    throw Error("objective needs one noisy pair per observed pair");
  }
  double j = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    j += log_partition(EnumeratedSpace(PairContext(observed.pairs[k], ttable), false), weights) -
         log_partition(EnumeratedSpace(PairContext(noisy.pairs[k], ttable), false), weights);
  }
  return j;
}

TrainResult train(const Corpus& corpus, const TTable& ttable, const TrainConfig& config,
                  const Corpus* probe_corpus) {
  config.validate();
  if (corpus.empty()) throw Error("cannot train on an empty corpus");

  const std::vector<PairContext> observed = contexts_of(corpus, ttable);
  std::vector<PairContext> noisy = contexts_of(make_noisy_corpus(corpus, config.noise), ttable);
  const Probe probe = prepare_probe(probe_corpus, ttable, config);

  TrainResult result;
  WeightVector theta = initial_weights(config);
  {
    EpochStats initial;
    evaluate_probe(probe, theta, config, initial);
    result.log.push_back(initial);
  }

  std::mt19937_64 rng(derive_seed(config.seed, "sgd"));
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.resample_noise && epoch > 0) {
      NoiseSpec spec = config.noise;
      spec.seed = derive_seed(config.noise.seed, static_cast<std::uint64_t>(epoch));
      noisy = contexts_of(make_noisy_corpus(corpus, spec), ttable);
    }
    std::shuffle(order.begin(), order.end(), rng);
    const double eta = config.learning_rate / (1.0 + epoch);
    double l1 = 0.0;
    for (std::size_t k : order) {
      const FeatureVector g = pair_gradient(observed[k], noisy[k], theta, config);
      l1 += g.lpNorm<1>();
      theta += (eta * (g - config.l2 * theta)).cwiseProduct(config.active);
    }
    if (!theta.allFinite()) {
      throw Error("training diverged in epoch " + std::to_string(epoch + 1) +
                  ": non-finite weights");
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.updates = order.size();
    stats.mean_gradient_l1 = l1 / static_cast<double>(order.size());
    evaluate_probe(probe, theta, config, stats);
    result.log.push_back(stats);
  }
  result.weights = theta;
  return result;
}

std::vector<Alignment> align_corpus(const Corpus& corpus, const TTable& ttable,
                                    const WeightVector& weights, int beam_size) {
  std::vector<Alignment> out;
  out.reserve(corpus.size());
  for (const auto& pair : corpus.pairs) {
    out.push_back(viterbi(pair, weights, ttable, beam_size).alignment);
  }
  return out;
}

void write_training_log(const std::vector<EpochStats>& log, std::ostream& out) {
  out << "epoch,updates,mean_gradient_l1,probe_objective,probe_aer\n";
  out << std::setprecision(10);
  for (const auto& s : log) {
    out << s.epoch << ',' << s.updates << ',' << s.mean_gradient_l1 << ',';
    if (s.probe_objective) out << *s.probe_objective;
    out << ',';
    if (s.probe_aer) out << *s.probe_aer;
    out << '\n';
  }
}

void write_weights(const WeightVector& weights, std::ostream& out) {
  out << std::setprecision(17);
  for (int k = 0; k < kNumFeatures; ++k) {
    out << k << ' ' << feature_name(k) << ' ' << weights[k] << '\n';
  }
}

void save_weights(const WeightVector& weights, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_weights(weights, out);
}

WeightVector read_weights(std::istream& in) {
  WeightVector weights = WeightVector::Zero();
  std::vector<bool> seen(kNumFeatures, false);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const Sentence fields = tokenize(line);
    if (fields.empty()) continue;
    const std::string where = " on line " + std::to_string(line_number);
    if (fields.size() != 3) throw Error("malformed weights entry" + where);
    int index = -1;
    double value = 0.0;
    try {
      std::size_t used = 0;
      index = std::stoi(fields[0], &used);
      if (used != fields[0].size()) index = -1;
      value = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw Error("bad value");
    } catch (const std::exception&) {
      throw Error("malformed weights entry" + where);
    }
    if (index < 0 || index >= kNumFeatures) throw Error("feature index out of range" + where);
    if (fields[1] != feature_name(index)) {
      throw Error("feature " + std::to_string(index) + " is '" + std::string(feature_name(index)) +
                  "', not '" + fields[1] + "'" + where);
    }
    if (seen[index]) throw Error("duplicate weight for feature " + std::to_string(index) + where);
    if (!std::isfinite(value)) throw Error("non-finite weight" + where);
    seen[index] = true;
    weights[index] = value;
  }
  for (int k = 0; k < kNumFeatures; ++k) {
    if (!seen[k]) throw Error("missing weight for feature " + std::to_string(k));
  }
  return weights;
}

WeightVector load_weights(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_weights(in);
}

}  // namespace contralign
