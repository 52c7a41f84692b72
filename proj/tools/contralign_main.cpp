// contralign: contrastive unsupervised training of log-linear word
// alignment models.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "contralign/corpus.hpp"
#include "contralign/error.hpp"
#include "contralign/exact.hpp"
#include "contralign/lexicon.hpp"
#include "contralign/metrics.hpp"
#include "contralign/noise.hpp"
#include "contralign/random.hpp"
#include "contralign/search.hpp"
#include "contralign/trainer.hpp"

namespace fs = std::filesystem;
using namespace contralign;

namespace {

const std::vector<std::string> kNoiseNames = {"shuffle", "delete", "insert", "replace", "mixed"};

struct CorpusArgs {
  std::string source;
  std::string target;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
  cmd->add_option("--source", args.source, "Source-side text, one sentence per line")->required();
  cmd->add_option("--target", args.target, "Target-side text, one sentence per line")->required();
}

Corpus short_pairs(const Corpus& corpus, int max_words) {
  Corpus out;
  for (const auto& pair : corpus.pairs) {
    if (pair.source_length() <= max_words && pair.target_length() <= max_words) {
      SentencePair p = pair;
      p.id = out.size();
      out.pairs.push_back(std::move(p));
    }
  }
  if (out.empty()) {
    throw Error("no sentence pair has at most " + std::to_string(max_words) +
                " words on both sides");
  }
  return out;
}

// ---------------------------------------------------------------- train-lexicon

struct LexiconArgs {
  CorpusArgs corpus;
  int iters = 5;
  std::string out;
};

void run_train_lexicon(const LexiconArgs& args) {
  const Corpus corpus = load_parallel(args.corpus.source, args.corpus.target);
  save_ttable(train_ttable(corpus, args.iters), args.out);
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  CorpusArgs corpus;
  std::string ttable;
  std::string noise = "shuffle";
  double rate = 0.25;
  int n = 1;
  int beam = kDefaultBeamSize;
  double lr = 0.05;
  int epochs = 5;
  double l2 = 0.0;
  std::uint64_t seed = 0;
  std::string init = "lexical";
  double init_bias = 3.0;
  bool local_only = false;
  bool resample_noise = false;
  std::string weights_out;
  std::string log_out;
  std::string gold_source;
  std::string gold_target;
  std::string gold;
};

void run_train(const TrainArgs& args) {
  const Corpus corpus = load_parallel(args.corpus.source, args.corpus.target);
  const TTable ttable = load_ttable(args.ttable);

  TrainConfig config;
  config.n = args.n;
  config.beam = args.beam;
  config.learning_rate = args.lr;
  config.epochs = args.epochs;
  config.l2 = args.l2;
  config.seed = args.seed;
  config.noise.strategy = parse_noise_strategy(args.noise);
  config.noise.rate = args.rate;
  config.noise.seed = derive_seed(args.seed, "noise");
  config.resample_noise = args.resample_noise;
  config.init = args.init == "zero" ? WeightInit::kZero : WeightInit::kLexical;
  config.init_link_bias = args.init_bias;
  if (args.local_only) config.active = local_feature_mask();

  std::optional<Corpus> probe;
  if (!args.gold.empty()) {
    if (args.gold_source.empty() || args.gold_target.empty()) {
      throw Error("--gold needs --gold-source and --gold-target");
    }
    probe = load_gold(args.gold, load_parallel(args.gold_source, args.gold_target));
  }

  const TrainResult result = train(corpus, ttable, config, probe ? &*probe : nullptr);
  save_weights(result.weights, args.weights_out);
  if (!args.log_out.empty()) {
    auto out = open_output(args.log_out);
    write_training_log(result.log, out);
  }
}

// ---------------------------------------------------------------- align

struct AlignArgs {
  CorpusArgs corpus;
  std::string ttable;
  std::string weights;
  int beam = kDefaultBeamSize;
  std::string out;
};

void run_align(const AlignArgs& args) {
  const Corpus corpus = load_parallel(args.corpus.source, args.corpus.target);
  const TTable ttable = load_ttable(args.ttable);
  const WeightVector weights = load_weights(args.weights);
  save_alignments(align_corpus(corpus, ttable, weights, args.beam), args.out);
}

// ---------------------------------------------------------------- eval-aer

struct EvalArgs {
  CorpusArgs corpus;
  std::string pred;
  std::string gold;
};

void run_eval_aer(const EvalArgs& args) {
  const Corpus corpus = load_parallel(args.corpus.source, args.corpus.target);
  const std::vector<Alignment> predicted = load_alignments(args.pred, corpus);
  const Corpus gold = load_gold(args.gold, corpus);
  std::cout << "AER " << std::fixed << std::setprecision(4) << corpus_aer(predicted, *gold.gold)
            << '\n';
}

// ---------------------------------------------------------------- approx-error

struct ApproxArgs {
  CorpusArgs corpus;
  std::string ttable;
  std::string estimator = "topn";
  std::vector<int> n = {1, 5, 10, 15};
  std::vector<int> sweeps = {1, 5, 10, 50, 100, 500};
  int beam = kDefaultBeamSize;
  int trials = 100;
  double rate = 0.25;
  std::uint64_t seed = 0;
  int max_words = 4;
  std::string out;
};

void run_approx_error(const ApproxArgs& args) {
  const Corpus corpus =
      short_pairs(load_parallel(args.corpus.source, args.corpus.target), args.max_words);
  const TTable ttable = load_ttable(args.ttable);

  NoiseSpec spec;
  spec.strategy = NoiseStrategy::kMixed;
  spec.rate = args.rate;
  spec.seed = derive_seed(args.seed, "noise");
  const Corpus noisy_all = make_noisy_corpus(corpus, spec);

  // Insertion can push a noisy side past the length bound; such pairs
  // are dropped so every member stays cheap to enumerate.
  Corpus observed;
  Corpus noisy;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& x = noisy_all.pairs[k];
    if (x.source_length() <= args.max_words && x.target_length() <= args.max_words) {
      observed.pairs.push_back(corpus.pairs[k]);
      noisy.pairs.push_back(x);
    }
  }
  if (observed.empty()) throw Error("no pair survives the length filter after noising");

  std::vector<Estimator> estimators;
  if (args.estimator == "topn") {
    for (int n : args.n) estimators.push_back(Estimator::beam_topn(n, args.beam));
  } else if (args.estimator == "topn-exact") {
    for (int n : args.n) estimators.push_back(Estimator::exact_topn(n));
  } else {
    for (int s : args.sweeps) estimators.push_back(Estimator::gibbs(s, derive_seed(args.seed, "gibbs")));
  }

  const ContrastSet data(observed, noisy, ttable);
  const auto reports = avg_approx_error(data, args.trials, estimators, derive_seed(args.seed, "theta"));
  auto out = open_output(args.out);
  write_reports_csv(reports, out);
}

// ---------------------------------------------------------------- concentration

struct ConcentrationArgs {
  CorpusArgs corpus;
  std::string ttable;
  int trials = 200;
  int k_max = 16;
  std::uint64_t seed = 0;
  int max_words = 4;
  std::string out;
};

void run_concentration(const ConcentrationArgs& args) {
  const Corpus corpus =
      short_pairs(load_parallel(args.corpus.source, args.corpus.target), args.max_words);
  const TTable ttable = load_ttable(args.ttable);
  std::vector<EnumeratedSpace> spaces;
  for (const auto& pair : corpus.pairs) spaces.emplace_back(pair, ttable);

  auto out = open_output(args.out);
  out << "trial,pair,cells";
  for (int k = 1; k <= args.k_max; ++k) out << ",mass_" << k;
  out << '\n' << std::setprecision(10);
  auto row = [&](const std::string& label, const std::string& pair, const std::string& cells,
                 const std::vector<double>& curve) {
    out << label << ',' << pair << ',' << cells;
    for (double v : curve) out << ',' << v;
    out << '\n';
  };

  row("control", "0", std::to_string(spaces[0].cells()),
      mass_curve(spaces[0], WeightVector::Zero(), args.k_max));

  const auto thetas = random_weights(args.trials, derive_seed(args.seed, "theta"));
  std::vector<std::vector<double>> curves;
  for (int t = 0; t < args.trials; ++t) {
    const std::size_t p = static_cast<std::size_t>(t) % spaces.size();
    curves.push_back(mass_curve(spaces[p], thetas[static_cast<std::size_t>(t)], args.k_max));
    row(std::to_string(t), std::to_string(p), std::to_string(spaces[p].cells()), curves.back());
  }
  std::vector<double> median(static_cast<std::size_t>(args.k_max));
  for (int k = 0; k < args.k_max; ++k) {
    std::vector<double> column;
    for (const auto& c : curves) column.push_back(c[static_cast<std::size_t>(k)]);
    std::sort(column.begin(), column.end());
    const std::size_t h = column.size() / 2;
    median[static_cast<std::size_t>(k)] =
        column.size() % 2 ? column[h] : 0.5 * (column[h - 1] + column[h]);
  }
  row("median", "", "", median);
}

// ---------------------------------------------------------------- make-noise

struct NoiseArgs {
  CorpusArgs corpus;
  std::string strategy = "shuffle";
  double rate = 0.25;
  std::uint64_t seed = 0;
  std::string out_source;
  std::string out_target;
};

void run_make_noise(const NoiseArgs& args) {
  const Corpus corpus = load_parallel(args.corpus.source, args.corpus.target);
  NoiseSpec spec;
  spec.strategy = parse_noise_strategy(args.strategy);
  spec.rate = args.rate;
  spec.seed = derive_seed(args.seed, "noise");
  save_parallel(make_noisy_corpus(corpus, spec), args.out_source, args.out_target);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive unsupervised training of log-linear word alignment models"};
  app.require_subcommand(1);

  LexiconArgs lexicon;
  auto* cmd_lexicon = app.add_subcommand("train-lexicon", "Train a two-way IBM Model 1 t-table");
  add_corpus_options(cmd_lexicon, lexicon.corpus);
  cmd_lexicon->add_option("--iters", lexicon.iters, "EM iterations")
      ->check(CLI::PositiveNumber);
  cmd_lexicon->add_option("--out", lexicon.out, "Output t-table")->required();

  TrainArgs tr;
  auto* cmd_train = app.add_subcommand("train", "Contrastive SGD training of feature weights");
  add_corpus_options(cmd_train, tr.corpus);
  cmd_train->add_option("--ttable", tr.ttable)->required()->check(CLI::ExistingFile);
  cmd_train->add_option("--noise", tr.noise)->check(CLI::IsMember(kNoiseNames));
  cmd_train->add_option("--rate", tr.rate, "Noise rate in (0, 1]")->check(CLI::Range(0.0, 1.0));
  cmd_train->add_option("--n", tr.n, "Top-n size")->check(CLI::PositiveNumber);
  cmd_train->add_option("--beam", tr.beam)->check(CLI::PositiveNumber);
  cmd_train->add_option("--lr", tr.lr)->check(CLI::PositiveNumber);
  cmd_train->add_option("--epochs", tr.epochs)->check(CLI::PositiveNumber);
  cmd_train->add_option("--l2", tr.l2)->check(CLI::NonNegativeNumber);
  cmd_train->add_option("--seed", tr.seed);
  cmd_train->add_option("--init", tr.init)->check(CLI::IsMember({"zero", "lexical"}));
  cmd_train->add_option("--init-bias", tr.init_bias, "Initial link_count weight (lexical init)");
  cmd_train->add_flag("--local-only", tr.local_only, "Train the five local features only");
  cmd_train->add_flag("--resample-noise", tr.resample_noise);
  cmd_train->add_option("--weights-out", tr.weights_out)->required();
  cmd_train->add_option("--log-out", tr.log_out);
  cmd_train->add_option("--gold-source", tr.gold_source, "Probe source text");
  cmd_train->add_option("--gold-target", tr.gold_target, "Probe target text");
  cmd_train->add_option("--gold", tr.gold, "Probe gold alignments");

  AlignArgs al;
  auto* cmd_align = app.add_subcommand("align", "Viterbi-align a corpus");
  add_corpus_options(cmd_align, al.corpus);
  cmd_align->add_option("--ttable", al.ttable)->required();
  cmd_align->add_option("--weights", al.weights)->required();
  cmd_align->add_option("--beam", al.beam)->check(CLI::PositiveNumber);
  cmd_align->add_option("--out", al.out)->required();

  EvalArgs ev;
  auto* cmd_eval = app.add_subcommand("eval-aer", "Corpus alignment error rate");
  add_corpus_options(cmd_eval, ev.corpus);
  cmd_eval->add_option("--pred", ev.pred)->required();
  cmd_eval->add_option("--gold", ev.gold)->required();

  ApproxArgs ap;
  auto* cmd_approx = app.add_subcommand("approx-error", "Average approximation error of an estimator");
  add_corpus_options(cmd_approx, ap.corpus);
  cmd_approx->add_option("--ttable", ap.ttable)->required();
  cmd_approx->add_option("--estimator", ap.estimator)
      ->check(CLI::IsMember({"topn", "topn-exact", "gibbs"}));
  cmd_approx->add_option("--n", ap.n, "Comma-separated top-n sizes")->delimiter(',');
  cmd_approx->add_option("--sweeps", ap.sweeps, "Comma-separated Gibbs sweep counts")
      ->delimiter(',');
  cmd_approx->add_option("--beam", ap.beam)->check(CLI::PositiveNumber);
  cmd_approx->add_option("--trials", ap.trials)->check(CLI::PositiveNumber);
  cmd_approx->add_option("--rate", ap.rate)->check(CLI::Range(0.0, 1.0));
  cmd_approx->add_option("--seed", ap.seed);
  cmd_approx->add_option("--max-words", ap.max_words)->check(CLI::PositiveNumber);
  cmd_approx->add_option("--out", ap.out)->required();

  ConcentrationArgs co;
  auto* cmd_conc = app.add_subcommand("concentration", "Top-k posterior mass curves");
  add_corpus_options(cmd_conc, co.corpus);
  cmd_conc->add_option("--ttable", co.ttable)->required();
  cmd_conc->add_option("--trials", co.trials)->check(CLI::PositiveNumber);
  cmd_conc->add_option("--k-max", co.k_max)->check(CLI::PositiveNumber);
  cmd_conc->add_option("--seed", co.seed);
  cmd_conc->add_option("--max-words", co.max_words)->check(CLI::PositiveNumber);
  cmd_conc->add_option("--out", co.out)->required();

  NoiseArgs no;
  auto* cmd_noise = app.add_subcommand("make-noise", "Write a noisy copy of a parallel corpus");
  add_corpus_options(cmd_noise, no.corpus);
  cmd_noise->add_option("--strategy", no.strategy)->check(CLI::IsMember(kNoiseNames));
  cmd_noise->add_option("--rate", no.rate)->check(CLI::Range(0.0, 1.0));
  cmd_noise->add_option("--seed", no.seed);
  cmd_noise->add_option("--out-source", no.out_source)->required();
  cmd_noise->add_option("--out-target", no.out_target)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_lexicon) run_train_lexicon(lexicon);
    if (*cmd_train) run_train(tr);
    if (*cmd_align) run_align(al);
    if (*cmd_eval) run_eval_aer(ev);
    if (*cmd_approx) run_approx_error(ap);
    if (*cmd_conc) run_concentration(co);
    if (*cmd_noise) run_make_noise(no);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
