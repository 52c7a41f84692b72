#include "contralign/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "contralign/error.hpp"

namespace contralign {

namespace {

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "trans_prob",          "relative_position",   "link_count",
    "monotone_neighbors",  "swap_neighbors",      "cross_count",
    "source_linked",       "target_linked",       "source_sibling_distance",
    "target_sibling_distance", "source_max_fertility", "target_max_fertility",
    "one_to_one",          "one_to_many",         "many_to_one",
    "many_to_many",
};

// Index of the link-type feature for a link whose source word has
// fertility `fs` and target word fertility `ft`.
constexpr int link_type(int fs, int ft) {
  return kOneToOne + (fs >= 2 ? 1 : 0) + (ft >= 2 ? 2 : 0);
}

// Sum of gaps between consecutive sorted positions.
int sibling_gaps(const std::vector<int>& sorted) {
  int gaps = 0;
  for (std::size_t k = 1; k < sorted.size(); ++k) gaps += sorted[k] - sorted[k - 1] - 1;
  return gaps;
}

// Change in sibling gap sum when `pos` joins a sorted position list.
int sibling_gap_delta(const std::vector<int>& sorted, int pos) {
  if (sorted.empty()) return 0;
  if (pos < sorted.front()) return sorted.front() - pos - 1;
  if (pos > sorted.back()) return pos - sorted.back() - 1;
  return -1;
}

void check_link(const PairContext& context, Link link) {
  if (!context.in_bounds(link)) {
    throw Error("link (" + std::to_string(link.src) + "," + std::to_string(link.tgt) +
                ") out of bounds for a " + std::to_string(context.source_length()) + "x" +
                std::to_string(context.target_length()) + " pair");
  }
}

}  // namespace

std::string_view feature_name(int index) {
  if (index < 0 || index >= kNumFeatures) throw Error("feature index out of range");
  return kFeatureNames[index];
}

PairContext::PairContext(const SentencePair& pair, const TTable& ttable)
    : trans_(pair.source_length(), pair.target_length()),
      relpos_(pair.source_length(), pair.target_length()) {
  const int l = pair.source_length();
  const int m = pair.target_length();
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < m; ++j) {
      const double fwd = ttable.forward_prob(pair.source[i], pair.target[j]);
      const double bwd = ttable.backward_prob(pair.target[j], pair.source[i]);
      trans_(i, j) = std::log(fwd + kProbSmoothing) + std::log(bwd + kProbSmoothing);
      relpos_(i, j) = std::abs(double(i + 1) / l - double(j + 1) / m);
    }
  }
}

FeatureVector extract_features(const PairContext& context, const Alignment& alignment) {
  const int l = context.source_length();
  const int m = context.target_length();
  FeatureVector phi = FeatureVector::Zero();
  std::vector<char> grid(static_cast<std::size_t>(l) * m, 0);
  std::vector<int> src_fert(l, 0);
  std::vector<int> tgt_fert(m, 0);
  std::vector<std::vector<int>> by_source(l);
  std::vector<std::vector<int>> by_target(m);
  for (const Link& link : alignment) {
    check_link(context, link);
    grid[static_cast<std::size_t>(link.src) * m + link.tgt] = 1;
    ++src_fert[link.src];
    ++tgt_fert[link.tgt];
    by_source[link.src].push_back(link.tgt);  // canonical order keeps these sorted
    by_target[link.tgt].push_back(link.src);
    phi[kTransProb] += context.trans(link);
    phi[kRelativePosition] += context.relpos(link);
  }
  auto has = [&](int i, int j) {
    return i >= 0 && i < l && j >= 0 && j < m && grid[static_cast<std::size_t>(i) * m + j];
  };

  const auto links = alignment.links();
  phi[kLinkCount] = static_cast<double>(links.size());
  for (std::size_t a = 0; a < links.size(); ++a) {
    const Link& x = links[a];
    if (has(x.src + 1, x.tgt + 1)) phi[kMonotoneNeighbors] += 1;
    if (has(x.src + 1, x.tgt - 1)) phi[kSwapNeighbors] += 1;
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      const Link& y = links[b];
      if ((x.src - y.src) * (x.tgt - y.tgt) < 0) phi[kCrossCount] += 1;
    }
    phi[link_type(src_fert[x.src], tgt_fert[x.tgt])] += 1;
  }
  for (int i = 0; i < l; ++i) {
    if (src_fert[i] > 0) phi[kSourceLinked] += 1;
    phi[kSourceSiblingDistance] += sibling_gaps(by_source[i]);
    phi[kSourceMaxFertility] = std::max<double>(phi[kSourceMaxFertility], src_fert[i]);
  }
  for (int j = 0; j < m; ++j) {
    if (tgt_fert[j] > 0) phi[kTargetLinked] += 1;
    phi[kTargetSiblingDistance] += sibling_gaps(by_target[j]);
    phi[kTargetMaxFertility] = std::max<double>(phi[kTargetMaxFertility], tgt_fert[j]);
  }
  return phi;
}

FeatureVector extract_features(const SentencePair& pair, const Alignment& alignment,
                               const TTable& ttable) {
  return extract_features(PairContext(pair, ttable), alignment);
}

// ---------------------------------------------------------------- AlignStats

AlignStats::AlignStats(const PairContext& context)
    : source_length_(context.source_length()),
      target_length_(context.target_length()),
      grid_(static_cast<std::size_t>(context.cells()), 0),
      source_fert_(source_length_, 0),
      target_fert_(target_length_, 0),
      source_links_(source_length_),
      target_links_(target_length_) {}

FeatureVector delta_add(const PairContext& context, const AlignStats& stats, Link link) {
  check_link(context, link);
  if (stats.contains(link)) {
    throw Error("link (" + std::to_string(link.src) + "," + std::to_string(link.tgt) +
                ") already present");
  }
  const int i = link.src;
  const int j = link.tgt;
  FeatureVector d = FeatureVector::Zero();
  d[kTransProb] = context.trans(link);
  d[kRelativePosition] = context.relpos(link);
  d[kLinkCount] = 1;
  d[kMonotoneNeighbors] = stats.has(i - 1, j - 1) + stats.has(i + 1, j + 1);
  d[kSwapNeighbors] = stats.has(i - 1, j + 1) + stats.has(i + 1, j - 1);

  int crossings = 0;
  for (const Link& other : stats.links_) {
    if ((i - other.src) * (j - other.tgt) < 0) ++crossings;
  }
  d[kCrossCount] = crossings;

  const int fs = stats.source_fert_[i];
  const int ft = stats.target_fert_[j];
  d[kSourceLinked] = fs == 0;
  d[kTargetLinked] = ft == 0;
  d[kSourceSiblingDistance] = sibling_gap_delta(stats.source_links_[i], j);
  d[kTargetSiblingDistance] = sibling_gap_delta(stats.target_links_[j], i);
  d[kSourceMaxFertility] = std::max(0, fs + 1 - stats.max_source_fert_);
  d[kTargetMaxFertility] = std::max(0, ft + 1 - stats.max_target_fert_);

  // Only the links sharing a word with the new one can change type, and
  // only when that word's fertility moves from 1 to 2.
  d[link_type(fs + 1, ft + 1)] += 1;
  if (fs == 1) {
    const int other_tgt = stats.source_links_[i].front();
    const int g = stats.target_fert_[other_tgt];
    d[link_type(1, g)] -= 1;
    d[link_type(2, g)] += 1;
  }
  if (ft == 1) {
    const int other_src = stats.target_links_[j].front();
    const int f = stats.source_fert_[other_src];
    d[link_type(f, 1)] -= 1;
    d[link_type(f, 2)] += 1;
  }
  return d;
}

void apply_add(AlignStats& stats, Link link, const FeatureVector& delta) {
  stats.grid_[stats.index(link)] = 1;
  const int fs = ++stats.source_fert_[link.src];
  const int ft = ++stats.target_fert_[link.tgt];
  stats.max_source_fert_ = std::max(stats.max_source_fert_, fs);
  stats.max_target_fert_ = std::max(stats.max_target_fert_, ft);
  auto& row = stats.source_links_[link.src];
  row.insert(std::lower_bound(row.begin(), row.end(), link.tgt), link.tgt);
  auto& col = stats.target_links_[link.tgt];
  col.insert(std::lower_bound(col.begin(), col.end(), link.src), link.src);
  stats.links_.push_back(link);
  stats.features_ += delta;
}

FeatureVector add_link(const PairContext& context, AlignStats& stats, Link link) {
  FeatureVector delta = delta_add(context, stats, link);
  apply_add(stats, link, delta);
  return delta;
}

void remove_link(const PairContext& context, AlignStats& stats, Link link) {
  check_link(context, link);
  if (!stats.contains(link)) {
    throw Error("link (" + std::to_string(link.src) + "," + std::to_string(link.tgt) +
                ") not present");
  }
  stats.grid_[stats.index(link)] = 0;
  --stats.source_fert_[link.src];
  --stats.target_fert_[link.tgt];
  auto& row = stats.source_links_[link.src];
  row.erase(std::lower_bound(row.begin(), row.end(), link.tgt));
  auto& col = stats.target_links_[link.tgt];
  col.erase(std::lower_bound(col.begin(), col.end(), link.src));
  auto it = std::find(stats.links_.begin(), stats.links_.end(), link);
  *it = stats.links_.back();
  stats.links_.pop_back();
  stats.max_source_fert_ =
      *std::max_element(stats.source_fert_.begin(), stats.source_fert_.end());
  stats.max_target_fert_ =
      *std::max_element(stats.target_fert_.begin(), stats.target_fert_.end());
  // The state now equals y \ {link}; re-adding would move the cache by
  // exactly the delta we have to take away.
  stats.features_ -= delta_add(context, stats, link);
}

}  // namespace contralign
