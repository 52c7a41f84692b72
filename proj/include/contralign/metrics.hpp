#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "contralign/corpus.hpp"
#include "contralign/exact.hpp"
#include "contralign/features.hpp"
#include "contralign/search.hpp"

namespace contralign {

// ---------------------------------------------------------------- AER

/// The four counts behind alignment error rate. Summing counts over a
/// corpus before taking the ratio gives the micro-averaged corpus AER.
struct AerCounts {
  std::size_t sure_hits = 0;      // |A & S|
  std::size_t possible_hits = 0;  // |A & P|
  std::size_t predicted = 0;      // |A|
  std::size_t sure = 0;           // |S|

  /// 1 - (|A&S| + |A&P|) / (|A| + |S|); 0 when A and S are both empty.
  double rate() const;
  AerCounts& operator+=(const AerCounts& other);
};

AerCounts aer_counts(const Alignment& predicted, const GoldAlignment& gold);
double aer(const Alignment& predicted, const GoldAlignment& gold);
double corpus_aer(std::span<const Alignment> predicted, std::span<const GoldAlignment> gold);

// ---------------------------------------------------------------- approximation error

/// How delta_N, the approximate expectation difference, is obtained.
struct Estimator {
  enum class Kind { kBeamTopN, kExactTopN, kGibbs };

  Kind kind = Kind::kBeamTopN;
  int n = 1;
  int beam = kDefaultBeamSize;
  int sweeps = 1;
  int burn_in = 0;
  std::uint64_t seed = 0;

  static Estimator beam_topn(int n, int beam = kDefaultBeamSize);
  static Estimator exact_topn(int n);
  static Estimator gibbs(int sweeps, std::uint64_t seed, int burn_in = 0);

  std::string name() const;
  /// n for the top-n kinds, sweeps for Gibbs.
  int parameter() const;
};

/// Observed pairs with their noisy counterparts, enumerated once so that
/// many weight vectors can be evaluated cheaply.
class ContrastSet {
 public:
  ContrastSet(const Corpus& observed, const Corpus& noisy, const TTable& ttable);

  std::size_t size() const { return observed_.size(); }
  const EnumeratedSpace& observed(std::size_t k) const { return observed_[k]; }
  const EnumeratedSpace& noisy(std::size_t k) const { return noisy_[k]; }

 private:
  std::vector<EnumeratedSpace> observed_;
  std::vector<EnumeratedSpace> noisy_;
};

/// E[phi | x] - E[phi | x~] by full enumeration.
FeatureVector delta_true(const EnumeratedSpace& observed, const EnumeratedSpace& noisy,
                         const WeightVector& weights);
FeatureVector delta_true(const SentencePair& observed, const SentencePair& noisy,
                         const WeightVector& weights, const TTable& ttable);

/// The same difference from an approximate estimator. `stream` selects
/// an independent Gibbs chain.
FeatureVector delta_approx(const EnumeratedSpace& observed, const EnumeratedSpace& noisy,
                           const WeightVector& weights, const Estimator& estimator,
                           std::uint64_t stream = 0);
FeatureVector delta_approx(const SentencePair& observed, const SentencePair& noisy,
                           const WeightVector& weights, const TTable& ttable,
                           const Estimator& estimator);

/// E(D, theta) = 1/(I K) sum_i ||delta_Y - delta_N||_1.
double approx_error(const ContrastSet& data, const WeightVector& weights,
                    const Estimator& estimator);

struct ApproxErrorReport {
  Estimator estimator;
  std::vector<double> errors;  // E(D, theta_t), one per weight vector
  double average = 0.0;
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  int features = kNumFeatures;
};

/// `trials` weight vectors with i.i.d. standard normal coordinates.
std::vector<WeightVector> random_weights(int trials, std::uint64_t seed);

/// Average approximation error over random weight vectors. Every
/// estimator sees the same weight vectors, and delta_Y is computed once
/// per (vector, pair).
std::vector<ApproxErrorReport> avg_approx_error(const ContrastSet& data, int trials,
                                                std::span<const Estimator> estimators,
                                                std::uint64_t seed);
ApproxErrorReport avg_approx_error(const ContrastSet& data, int trials,
                                   const Estimator& estimator, std::uint64_t seed);

/// CSV with header "estimator,param,t,error"; one row per weight vector
/// and a closing "mean" row per report.
void write_reports_csv(std::span<const ApproxErrorReport> reports, std::ostream& out);

}  // namespace contralign
