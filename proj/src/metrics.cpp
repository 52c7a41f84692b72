#include "contralign/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <random>

#include "contralign/error.hpp"
#include "contralign/features.hpp"
#include "contralign/gibbs.hpp"
#include "contralign/random.hpp"
#include "contralign/trainer.hpp"

namespace contralign {

double AerCounts::rate() const {
  const std::size_t denom = predicted + sure;
  if (denom == 0) return 0.0;
  return 1.0 - static_cast<double>(sure_hits + possible_hits) / static_cast<double>(denom);
}

AerCounts& AerCounts::operator+=(const AerCounts& other) {
  sure_hits += other.sure_hits;
  possible_hits += other.possible_hits;
  predicted += other.predicted;
  sure += other.sure;
  return *this;
}

AerCounts aer_counts(const Alignment& predicted, const GoldAlignment& gold) {
  AerCounts c;
  c.predicted = predicted.size();
  c.sure = gold.sure.size();
  for (const Link& link : predicted) {
    if (gold.sure.contains(link)) ++c.sure_hits;
    if (gold.possible.contains(link)) ++c.possible_hits;
  }
  return c;
}

double aer(const Alignment& predicted, const GoldAlignment& gold) {
  return aer_counts(predicted, gold).rate();
}

double corpus_aer(std::span<const Alignment> predicted, std::span<const GoldAlignment> gold) {
  if (predicted.size() != gold.size()) {
    throw Error("corpus AER: " + std::to_string(predicted.size()) + " predictions but " +
                std::to_string(gold.size()) + " gold alignments");
  }
  AerCounts total;
  for (std::size_t k = 0; k < predicted.size(); ++k) total += aer_counts(predicted[k], gold[k]);
  return total.rate();
}

// ---------------------------------------------------------------- estimators

Estimator Estimator::beam_topn(int n, int beam) {
  Estimator e;
  e.kind = Kind::kBeamTopN;
  e.n = n;
  e.beam = beam;
  return e;
}

Estimator Estimator::exact_topn(int n) {
  Estimator e;
  e.kind = Kind::kExactTopN;
  e.n = n;
  return e;
}

Estimator Estimator::gibbs(int sweeps, std::uint64_t seed, int burn_in) {
  Estimator e;
  e.kind = Kind::kGibbs;
  e.sweeps = sweeps;
  e.burn_in = burn_in;
  e.seed = seed;
  return e;
}

std::string Estimator::name() const {
  switch (kind) {
    case Kind::kBeamTopN: return "topn";
    case Kind::kExactTopN: return "topn-exact";
    case Kind::kGibbs: return "gibbs";
  }
  return "unknown";
}

int Estimator::parameter() const { return kind == Kind::kGibbs ? sweeps : n; }

ContrastSet::ContrastSet(const Corpus& observed, const Corpus& noisy, const TTable& ttable) {
  if (observed.size() != noisy.size()) {
    throw Error("contrast set needs one noisy pair per observed pair");
  }
  observed_.reserve(observed.size());
  noisy_.reserve(noisy.size());
  for (std::size_t k = 0; k < observed.size(); ++k) {
    observed_.emplace_back(observed.pairs[k], ttable);
    noisy_.emplace_back(noisy.pairs[k], ttable);
  }
}

// ---------------------------------------------------------------- deltas

namespace {

FeatureVector approx_expectation(const EnumeratedSpace& space, const WeightVector& weights,
                                 const Estimator& estimator, std::uint64_t chain_seed) {
  switch (estimator.kind) {
    case Estimator::Kind::kBeamTopN:
      return topn_expectation(beam_search(space.context(), weights, estimator.beam, estimator.n));
    case Estimator::Kind::kExactTopN:
      return topn_expectation(exact_topn(space, weights, estimator.n));
    case Estimator::Kind::kGibbs:
      return gibbs_expectation(space.context(), weights, estimator.sweeps, estimator.burn_in,
                               chain_seed);
  }
  throw Error("unknown estimator");
}

double l1_gap(const FeatureVector& truth, const FeatureVector& approx) {
  return (truth - approx).lpNorm<1>();
}

}  // namespace

FeatureVector delta_true(const EnumeratedSpace& observed, const EnumeratedSpace& noisy,
                         const WeightVector& weights) {
  return exact_expectation(observed, weights) - exact_expectation(noisy, weights);
}

FeatureVector delta_true(const SentencePair& observed, const SentencePair& noisy,
                         const WeightVector& weights, const TTable& ttable) {
  return delta_true(EnumeratedSpace(observed, ttable), EnumeratedSpace(noisy, ttable), weights);
}

FeatureVector delta_approx(const EnumeratedSpace& observed, const EnumeratedSpace& noisy,
                           const WeightVector& weights, const Estimator& estimator,
                           std::uint64_t stream) {
  const std::uint64_t chain = derive_seed(estimator.seed, stream);
  return approx_expectation(observed, weights, estimator, derive_seed(chain, "observed")) -
         approx_expectation(noisy, weights, estimator, derive_seed(chain, "noisy"));
}

FeatureVector delta_approx(const SentencePair& observed, const SentencePair& noisy,
                           const WeightVector& weights, const TTable& ttable,
                           const Estimator& estimator) {
  // Top-n by beam search and Gibbs never touch the enumeration, so build
  // uncached spaces only when the exact variant needs them.
  if (estimator.kind == Estimator::Kind::kExactTopN) {
    return delta_approx(EnumeratedSpace(observed, ttable), EnumeratedSpace(noisy, ttable),
                        weights, estimator);
  }
  const PairContext obs(observed, ttable);
  const PairContext noi(noisy, ttable);
  const std::uint64_t chain = derive_seed(estimator.seed, std::uint64_t{0});
  auto expect = [&](const PairContext& ctx, std::uint64_t seed) {
    if (estimator.kind == Estimator::Kind::kGibbs) {
      return gibbs_expectation(ctx, weights, estimator.sweeps, estimator.burn_in, seed);
    }
    return topn_expectation(beam_search(ctx, weights, estimator.beam, estimator.n));
  };
  return expect(obs, derive_seed(chain, "observed")) - expect(noi, derive_seed(chain, "noisy"));
}

double approx_error(const ContrastSet& data, const WeightVector& weights,
                    const Estimator& estimator) {
  if (data.size() == 0) throw Error("approximation error of an empty data set");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const FeatureVector truth = delta_true(data.observed(i), data.noisy(i), weights);
    total += l1_gap(truth, delta_approx(data.observed(i), data.noisy(i), weights, estimator, i));
  }
  return total / (static_cast<double>(data.size()) * kNumFeatures);
}

std::vector<WeightVector> random_weights(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<WeightVector> out(static_cast<std::size_t>(std::max(trials, 0)));
  for (auto& w : out) {
    for (int k = 0; k < kNumFeatures; ++k) w[k] = normal(rng);
  }
  return out;
}

std::vector<ApproxErrorReport> avg_approx_error(const ContrastSet& data, int trials,
                                                std::span<const Estimator> estimators,
                                                std::uint64_t seed) {
  if (trials < 1) throw Error("need at least one weight vector");
  if (data.size() == 0) throw Error("approximation error of an empty data set");
  const auto thetas = random_weights(trials, seed);
  const std::size_t pairs = data.size();

  std::vector<ApproxErrorReport> reports;
  for (const auto& e : estimators) {
    ApproxErrorReport r;
    r.estimator = e;
    r.seed = seed;
    r.pairs = pairs;
    r.errors.assign(static_cast<std::size_t>(trials), 0.0);
    reports.push_back(std::move(r));
  }
  for (int t = 0; t < trials; ++t) {
    const WeightVector& theta = thetas[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < pairs; ++i) {
      const FeatureVector truth = delta_true(data.observed(i), data.noisy(i), theta);
      const std::uint64_t stream = static_cast<std::uint64_t>(t) * pairs + i;
      for (auto& r : reports) {
        r.errors[static_cast<std::size_t>(t)] +=
            l1_gap(truth, delta_approx(data.observed(i), data.noisy(i), theta, r.estimator,
                                       stream));
      }
    }
  }
  const double norm = static_cast<double>(pairs) * kNumFeatures;
  for (auto& r : reports) {
    double sum = 0.0;
    for (double& e : r.errors) {
      e /= norm;
      sum += e;
    }
    r.average = sum / trials;
  }
  return reports;
}

ApproxErrorReport avg_approx_error(const ContrastSet& data, int trials,
                                   const Estimator& estimator, std::uint64_t seed) {
  return avg_approx_error(data, trials, std::span<const Estimator>(&estimator, 1), seed).front();
}

void write_reports_csv(std::span<const ApproxErrorReport> reports, std::ostream& out) {
  out << "estimator,param,t,error\n";
  out << std::setprecision(10);
  for (const auto& r : reports) {
    const std::string head = r.estimator.name() + "," + std::to_string(r.estimator.parameter());
    for (std::size_t t = 0; t < r.errors.size(); ++t) {
      out << head << ',' << t << ',' << r.errors[t] << '\n';
    }
    out << head << ",mean," << r.average << '\n';
  }
}

}  // namespace contralign
