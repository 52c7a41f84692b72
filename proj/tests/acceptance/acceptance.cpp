// Acceptance suite: one PASS/FAIL line per criterion.
//
//   contralign_acceptance <path-to-contralign-cli> [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "contralign/corpus.hpp"
#include "contralign/exact.hpp"
#include "contralign/features.hpp"
#include "contralign/lexicon.hpp"
#include "contralign/metrics.hpp"
#include "contralign/noise.hpp"
#include "contralign/random.hpp"
#include "contralign/search.hpp"
#include "contralign/trainer.hpp"
#include "support/toy_corpus.hpp"

namespace fs = std::filesystem;
using namespace contralign;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << std::fixed << v;
  return out.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// ---------------------------------------------------------------- shared data

const Corpus& toy_train() {
  static const Corpus corpus = toy::make_reordering_corpus({.pairs = 500, .seed = 1});
  return corpus;
}

const Corpus& toy_heldout() {
  static const Corpus corpus = toy::make_reordering_corpus({.pairs = 100, .seed = 2});
  return corpus;
}

const TTable& toy_ttable() {
  static const TTable table = train_ttable(toy_train(), 10);
  return table;
}

// Short pairs (at most 4 words per side) with mixed-noise counterparts
// that also stay within 4 words.
struct ShortContrast {
  Corpus observed;
  Corpus noisy;
};

const ShortContrast& short_contrast() {
  static const ShortContrast data = [] {
    const Corpus pool = toy::make_short_corpus(80, 4, 11);
    NoiseSpec spec{NoiseStrategy::kMixed, 0.25, 12};
    const Corpus noisy = make_noisy_corpus(pool, spec);
    ShortContrast d;
    for (std::size_t k = 0; k < pool.size() && d.observed.size() < 40; ++k) {
      const auto& x = noisy.pairs[k];
      if (x.source_length() > 4 || x.target_length() > 4) continue;
      d.observed.pairs.push_back(pool.pairs[k]);
      d.noisy.pairs.push_back(x);
    }
    return d;
  }();
  return data;
}

const ContrastSet& short_set() {
  static const ContrastSet set(short_contrast().observed, short_contrast().noisy, toy_ttable());
  return set;
}

// ---------------------------------------------------------------- 1

Outcome gradient_check() {
  const Corpus pool = toy::make_short_corpus(200, 3, 21);
  const Vocabulary vocab = corpus_vocabulary(pool);
  std::mt19937_64 rng(22);
  std::normal_distribution<double> normal;
  TrainConfig exact_mode;
  exact_mode.mode = ExpectationMode::kExact;

  const double h = 1e-5;
  double worst = 0.0;
  int draws = 0;
  for (std::size_t k = 0; draws < 100 && k < 10 * pool.size(); ++k) {
    const SentencePair& x = pool.pairs[k % pool.size()];
    if (x.cells() > 9) continue;
    NoiseSpec spec{NoiseStrategy::kMixed, 0.25, rng()};
    const SentencePair noisy = make_noise(x, spec, vocab);
    if (noisy.cells() > 9) continue;
    WeightVector theta;
    for (int f = 0; f < kNumFeatures; ++f) theta[f] = normal(rng);

    const FeatureVector g = pair_gradient(x, noisy, theta, toy_ttable(), exact_mode);
    Corpus obs_c, noisy_c;
    obs_c.pairs = {x};
    noisy_c.pairs = {noisy};
    FeatureVector fd;
    for (int f = 0; f < kNumFeatures; ++f) {
      WeightVector up = theta, down = theta;
      up[f] += h;
      down[f] -= h;
      fd[f] = (exact_objective(obs_c, noisy_c, up, toy_ttable()) -
               exact_objective(obs_c, noisy_c, down, toy_ttable())) /
              (2 * h);
    }
    const double scale = std::max(g.norm(), fd.norm());
    const double rel = scale > 1e-12 ? (g - fd).norm() / scale : 0.0;
    worst = std::max(worst, rel);
    ++draws;
  }
  return {draws >= 100 && worst < 1e-4,
          std::to_string(draws) + " draws, max relative error " + sci(worst) +
              " (threshold 1e-4)"};
}

// ---------------------------------------------------------------- 2

Outcome incremental_equivalence() {
  std::mt19937_64 rng(31);
  const Corpus pool = toy::make_reordering_corpus({.pairs = 200, .seed = 32});
  int cases = 0;
  int failures = 0;
  double worst_real = 0.0;
  for (; cases < 10000; ++cases) {
    const SentencePair& x = pool.pairs[static_cast<std::size_t>(cases) % pool.size()];
    const PairContext ctx(x, toy_ttable());
    std::vector<Link> cells;
    for (int i = 0; i < x.source_length(); ++i)
      for (int j = 0; j < x.target_length(); ++j) cells.push_back({i, j});
    std::shuffle(cells.begin(), cells.end(), rng);
    const std::size_t size =
        std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng);
    AlignStats stats(ctx);
    for (std::size_t k = 0; k < size; ++k) add_link(ctx, stats, cells[k]);
    const Link extra = cells[size];
    const FeatureVector delta = delta_add(ctx, stats, extra);
    apply_add(stats, extra, delta);
    const FeatureVector full = extract_features(ctx, stats.alignment());
    const FeatureVector diff = (stats.features() - full).cwiseAbs();
    worst_real = std::max(worst_real, diff.head<2>().maxCoeff());
    if (diff.head<2>().maxCoeff() > 1e-9 || diff.tail<kNumFeatures - 2>().maxCoeff() != 0.0) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(cases) + " cases, " + std::to_string(failures) +
                             " mismatches, max real-feature error " + sci(worst_real)};
}

// ---------------------------------------------------------------- 3

struct MatchRate {
  int trials = 0;
  int matches = 0;
  int identical = 0;
  double rate() const { return double(matches) / trials; }
};

// A score tie with the exact argmax also counts: both are argmaxes.
void record_match(MatchRate& r, const SentencePair& x, const WeightVector& theta) {
  const PairContext ctx(x, toy_ttable());
  const ScoredAlignment beam = beam_search(ctx, theta, 64, 1)[0];
  const ScoredAlignment best = exact_topn(EnumeratedSpace(ctx, false), theta, 1)[0];
  ++r.trials;
  if (beam.alignment == best.alignment) ++r.identical;
  if (beam.alignment == best.alignment ||
      std::abs(beam.score - best.score) <= 1e-9 * std::max(1.0, std::abs(best.score))) {
    ++r.matches;
  }
}

Outcome beam_vs_exact() {
  // Random pairs: shapes uniform over 1..3 x 1..3, words drawn from the toy vocabulary.
  const Vocabulary vocab = corpus_vocabulary(toy_train());
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> length(1, 3);
  auto random_theta = [&] {
    WeightVector theta;
    for (int f = 0; f < kNumFeatures; ++f) theta[f] = normal(rng);
    return theta;
  };
  auto pick = [&](const std::vector<std::string>& words) {
    return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
  };
  MatchRate random_pairs;
  while (random_pairs.trials < 500) {
    SentencePair x;
    const int l = length(rng), m = length(rng);
    for (int i = 0; i < l; ++i) x.source.push_back(pick(vocab.source));
    for (int j = 0; j < m; ++j) x.target.push_back(pick(vocab.target));
    const WeightVector theta = random_theta();
    record_match(random_pairs, x, theta);
  }

  // Logged only: 3x3 translation pairs from the toy grammar.
  const Corpus pool = toy::make_short_corpus(500, 3, 41);
  MatchRate translations;
  for (const auto& x : pool.pairs) {
    if (x.cells() > 9) continue;
    const WeightVector theta = random_theta();
    record_match(translations, x, theta);
  }

  return {random_pairs.rate() >= 0.95,
          std::to_string(random_pairs.trials) + " random pairs, b=64: top-1 matches exact argmax in " +
              fmt(100 * random_pairs.rate(), 1) + "% (identical alignment " +
              fmt(100.0 * random_pairs.identical / random_pairs.trials, 1) +
              "%), threshold 95%; toy translation pairs: " + fmt(100 * translations.rate(), 1) +
              "% of " + std::to_string(translations.trials)};
}

// ---------------------------------------------------------------- 4

Outcome concentration() {
  const Corpus pairs = toy::make_short_corpus(50, 4, 51);
  std::vector<EnumeratedSpace> spaces;
  for (const auto& x : pairs.pairs) spaces.emplace_back(x, toy_ttable());
  const auto thetas = random_weights(200, 52);
  std::vector<double> top5;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    top5.push_back(mass_curve(spaces[t % spaces.size()], thetas[t], 5).back());
  }
  std::vector<double> sorted = top5;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[99] + sorted[100]);
  const double above = std::count_if(top5.begin(), top5.end(), [](double v) { return v > 0.99; }) /
                       double(top5.size());
  return {median > 0.99 && above >= 0.70,
          "T=200: median top-5 mass " + fmt(median, 5) + " (>0.99), " + fmt(100 * above, 1) +
              "% of trials above 0.99 (>=70%)"};
}

// ---------------------------------------------------------------- 5

Outcome approx_curve() {
  const std::vector<int> ns = {1, 5, 10, 15};
  std::vector<Estimator> estimators;
  for (int n : ns) estimators.push_back(Estimator::beam_topn(n));
  // Logged only: the same curve with exact top-n sets.
  for (int n : ns) estimators.push_back(Estimator::exact_topn(n));
  const auto reports = avg_approx_error(short_set(), 100, estimators, 61);
  std::string detail = "I=" + std::to_string(short_set().size()) + " T=100 beam b=8:";
  bool ok = true;
  const double e1 = reports[0].average;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    detail += " n=" + std::to_string(ns[k]) + ":" + fmt(reports[k].average);
    if (k > 0 && reports[k].average > reports[k - 1].average + 0.05 * e1) ok = false;
  }
  ok = ok && reports[ns.size() - 1].average <= 0.25 * e1;
  detail += " (non-increasing within 5% of n=1, error(15) <= 0.25 error(1)); exact top-n:";
  for (std::size_t k = 0; k < ns.size(); ++k) {
    detail += " " + fmt(reports[ns.size() + k].average);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- 6

Outcome gibbs_comparison() {
  const std::vector<int> samples = {1, 5, 10, 50, 100, 500};
  std::vector<Estimator> estimators;
  for (int s : samples) estimators.push_back(Estimator::gibbs(s, 71));
  estimators.push_back(Estimator::beam_topn(1));
  const auto reports = avg_approx_error(short_set(), 100, estimators, 72);
  std::string detail = "T=100 gibbs:";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    detail += " " + std::to_string(samples[k]) + ":" + fmt(reports[k].average);
  }
  const double gibbs1 = reports[0].average;
  const double gibbs500 = reports[samples.size() - 1].average;
  const double topn1 = reports.back().average;
  detail += "; top-1: " + fmt(topn1);
  return {topn1 < gibbs500 && gibbs500 < gibbs1, detail};
}

// ---------------------------------------------------------------- 7-9

struct TrainedRun {
  double aer = 1.0;
  WeightVector weights;
};

TrainedRun train_and_evaluate(const TrainConfig& config) {
  const TrainResult result = train(toy_train(), toy_ttable(), config);
  const auto predicted = align_corpus(toy_heldout(), toy_ttable(), result.weights, config.beam);
  return {corpus_aer(predicted, *toy_heldout().gold), result.weights};
}

TrainConfig default_config(NoiseStrategy strategy) {
  TrainConfig config;
  config.seed = 7;
  config.noise.strategy = strategy;
  config.noise.seed = derive_seed(config.seed, "noise");
  return config;
}

const TrainedRun& shuffle_run() {
  static const TrainedRun run = train_and_evaluate(default_config(NoiseStrategy::kShuffle));
  return run;
}

Outcome toy_training() {
  const auto baseline_alignments =
      align_corpus(toy_heldout(), toy_ttable(), WeightVector::Zero(), kDefaultBeamSize);
  const double baseline = corpus_aer(baseline_alignments, *toy_heldout().gold);
  TrainConfig config = default_config(NoiseStrategy::kShuffle);
  const auto init_alignments =
      align_corpus(toy_heldout(), toy_ttable(), initial_weights(config), config.beam);
  const double init = corpus_aer(init_alignments, *toy_heldout().gold);
  const double trained = shuffle_run().aer;
  const double improvement = (baseline - trained) / baseline;
  return {improvement >= 0.5, "held-out AER: theta=0 " + fmt(baseline) + ", initial " +
                                  fmt(init) + ", trained " + fmt(trained) +
                                  " (relative improvement " + fmt(100 * improvement, 1) +
                                  "%, need >=50%)"};
}

Outcome ablation() {
  TrainConfig local = default_config(NoiseStrategy::kShuffle);
  local.active = local_feature_mask();
  const double local_aer = train_and_evaluate(local).aer;
  const double full_aer = shuffle_run().aer;
  return {full_aer <= local_aer,
          "held-out AER: local " + fmt(local_aer) + ", local+non-local " + fmt(full_aer)};
}

Outcome noise_direction() {
  const double replace_aer = train_and_evaluate(default_config(NoiseStrategy::kReplace)).aer;
  const double shuffle_aer = shuffle_run().aer;
  return {shuffle_aer <= replace_aer,
          "held-out AER: shuffle " + fmt(shuffle_aer) + ", replace " + fmt(replace_aer)};
}

// ---------------------------------------------------------------- 10

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "contralign_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const Corpus train_corpus = toy::slice(toy_train(), 0, 120);
  save_parallel(train_corpus, dir / "train.src", dir / "train.tgt");
  const Corpus heldout = toy::slice(toy_heldout(), 0, 30);
  save_parallel(heldout, dir / "dev.src", dir / "dev.tgt");
  {
    std::ofstream gold(dir / "dev.gold");
    for (const auto& g : *heldout.gold) gold << to_string(g.sure) << '\n';
  }
  save_parallel(toy::make_short_corpus(12, 4, 91), dir / "short.src", dir / "short.tgt");

  auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::string corpus = " --source " + p("train.src") + " --target " + p("train.tgt");
  const std::string dev = " --source " + p("dev.src") + " --target " + p("dev.tgt");
  const std::string shorts = " --source " + p("short.src") + " --target " + p("short.tgt");

  struct Step {
    std::string name;
    std::string args;  // "{r}" is replaced by the run tag
    std::vector<std::string> outputs;
  };
  const std::vector<Step> steps = {
      {"train-lexicon", "train-lexicon" + corpus + " --iters 5 --out " + p("tt.{r}"), {"tt.{r}"}},
      {"make-noise",
       "make-noise" + corpus + " --strategy mixed --seed 3 --out-source " + p("noisy.{r}.src") +
           " --out-target " + p("noisy.{r}.tgt"),
       {"noisy.{r}.src", "noisy.{r}.tgt"}},
      {"train",
       "train" + corpus + " --ttable " + p("tt.a") + " --epochs 2 --seed 5 --weights-out " +
           p("w.{r}") + " --log-out " + p("log.{r}") + " --gold-source " + p("dev.src") +
           " --gold-target " + p("dev.tgt") + " --gold " + p("dev.gold"),
       {"w.{r}", "log.{r}"}},
      {"align", "align" + dev + " --ttable " + p("tt.a") + " --weights " + p("w.a") + " --out " +
                    p("pred.{r}"),
       {"pred.{r}"}},
      {"eval-aer", "eval-aer" + dev + " --pred " + p("pred.a") + " --gold " + p("dev.gold") +
                       " > " + p("aer.{r}"),
       {"aer.{r}"}},
      {"approx-error",
       "approx-error" + shorts + " --ttable " + p("tt.a") +
           " --estimator gibbs --sweeps 1,5 --trials 3 --seed 9 --out " + p("approx.{r}"),
       {"approx.{r}"}},
      {"concentration",
       "concentration" + shorts + " --ttable " + p("tt.a") + " --trials 5 --k-max 6 --seed 9 --out " +
           p("conc.{r}"),
       {"conc.{r}"}},
  };

  auto expand = [](std::string s, const std::string& tag) {
    for (std::size_t pos; (pos = s.find("{r}")) != std::string::npos;) s.replace(pos, 3, tag);
    return s;
  };
  std::vector<std::string> failed;
  for (const auto& step : steps) {
    bool same = true;
    for (const std::string tag : {"a", "b"}) {
      const std::string command = cli + " " + expand(step.args, tag);
      if (std::system(command.c_str()) != 0) {
        same = false;
        break;
      }
    }
    for (const auto& out : step.outputs) {
      const auto a = slurp(dir / expand(out, "a"));
      const auto b = slurp(dir / expand(out, "b"));
      if (a.empty() || a != b) same = false;
    }
    if (!same) failed.push_back(step.name);
  }
  std::string detail = std::to_string(steps.size()) + " commands rerun";
  for (const auto& f : failed) detail += "; differs: " + f;
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: contralign_acceptance <contralign-cli> [criteria...]\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  for (int k = 2; k < argc; ++k) only.insert(std::atoi(argv[k]));

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "oracle gradient check", 60, gradient_check},
      {2, "incremental feature equivalence", 30, incremental_equivalence},
      {3, "beam top-1 vs exact argmax", 120, beam_vs_exact},
      {4, "posterior mass concentration", 120, concentration},
      {5, "approximation error curve", 300, approx_curve},
      {6, "top-n vs Gibbs", 600, gibbs_comparison},
      {7, "end-to-end toy training", 300, toy_training},
      {8, "non-local feature ablation", 600, ablation},
      {9, "noise strategy direction", 600, noise_direction},
      {10, "CLI determinism", 300, [&cli] { return cli_determinism(cli); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %2d %s: %s [%.1fs of %.0fs]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
