#include "contralign/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "contralign/error.hpp"

namespace contralign {

// ---------------------------------------------------------------- Alignment

Alignment::Alignment(std::initializer_list<Link> links) : Alignment(std::vector<Link>(links)) {}

Alignment::Alignment(std::vector<Link> links) : links_(std::move(links)) {
  std::sort(links_.begin(), links_.end());
  links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
}

bool Alignment::insert(Link link) {
  auto it = std::lower_bound(links_.begin(), links_.end(), link);
  if (it != links_.end() && *it == link) return false;
  links_.insert(it, link);
  return true;
}

bool Alignment::erase(Link link) {
  auto it = std::lower_bound(links_.begin(), links_.end(), link);
  if (it == links_.end() || *it != link) return false;
  links_.erase(it);
  return true;
}

bool Alignment::contains(Link link) const {
  return std::binary_search(links_.begin(), links_.end(), link);
}

Alignment Alignment::with(Link link) const {
  Alignment out;
  out.links_.reserve(links_.size() + 1);
  auto it = std::lower_bound(links_.begin(), links_.end(), link);
  out.links_.insert(out.links_.end(), links_.begin(), it);
  if (it == links_.end() || *it != link) out.links_.push_back(link);
  out.links_.insert(out.links_.end(), it, links_.end());
  return out;
}

std::string to_string(const Alignment& alignment) {
  std::string out;
  for (const Link& link : alignment) {
    if (!out.empty()) out += ' ';
    out += std::to_string(link.src + 1);
    out += '-';
    out += std::to_string(link.tgt + 1);
  }
  return out;
}

std::size_t AlignmentHash::operator()(const Alignment& alignment) const noexcept {
  std::size_t h = 0x84222325cbf29ce4ULL;
  for (const Link& link : alignment) {
    const std::size_t v = (static_cast<std::size_t>(link.src) << 32) ^
                          static_cast<std::size_t>(static_cast<unsigned>(link.tgt));
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------- TTable

namespace {

double lookup(const LexicalTable& table, const std::string& given, const std::string& word) {
  auto row = table.find(given);
  if (row == table.end()) return 0.0;
  auto cell = row->second.find(word);
  return cell == row->second.end() ? 0.0 : cell->second;
}

}  // namespace

double TTable::forward_prob(const std::string& source, const std::string& target) const {
  return lookup(forward, source, target);
}

double TTable::backward_prob(const std::string& target, const std::string& source) const {
  return lookup(backward, target, source);
}

std::size_t TTable::size() const {
  std::size_t n = 0;
  for (const auto& [_, row] : forward) n += row.size();
  for (const auto& [_, row] : backward) n += row.size();
  return n;
}

// ---------------------------------------------------------------- files

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

Sentence tokenize(const std::string& line) {
  Sentence tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

namespace {

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

Corpus read_parallel(std::istream& source, std::istream& target) {
  const auto src_lines = read_lines(source);
  const auto tgt_lines = read_lines(target);
  if (src_lines.size() != tgt_lines.size()) {
    throw Error("line count mismatch: source has " + std::to_string(src_lines.size()) +
                " lines, target has " + std::to_string(tgt_lines.size()));
  }
  Corpus corpus;
  corpus.pairs.reserve(src_lines.size());
  for (std::size_t k = 0; k < src_lines.size(); ++k) {
    SentencePair pair{tokenize(src_lines[k]), tokenize(tgt_lines[k]), k};
    if (pair.source.empty()) throw Error("empty source sentence on line " + std::to_string(k + 1));
    if (pair.target.empty()) throw Error("empty target sentence on line " + std::to_string(k + 1));
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

Corpus load_parallel(const std::filesystem::path& source_path,
                     const std::filesystem::path& target_path) {
  auto source = open_input(source_path);
  auto target = open_input(target_path);
  return read_parallel(source, target);
}

void write_parallel(const Corpus& corpus, std::ostream& source, std::ostream& target) {
  auto join = [](const Sentence& s, std::ostream& out) {
    for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
    out << '\n';
  };
  for (const auto& pair : corpus.pairs) {
    join(pair.source, source);
    join(pair.target, target);
  }
}

void save_parallel(const Corpus& corpus, const std::filesystem::path& source_path,
                   const std::filesystem::path& target_path) {
  auto source = open_output(source_path);
  auto target = open_output(target_path);
  write_parallel(corpus, source, target);
}

// ---------------------------------------------------------------- gold

namespace {

bool parse_int(std::string_view text, int& value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

GoldAlignment parse_gold_line(const std::string& line, const SentencePair& pair,
                              std::size_t line_number) {
  GoldAlignment gold;
  for (const std::string& item : tokenize(line)) {
    const auto sep = item.find_first_of("-?");
    int s = 0;
    int t = 0;
    if (sep == std::string::npos ||
        !parse_int(std::string_view(item).substr(0, sep), s) ||
        !parse_int(std::string_view(item).substr(sep + 1), t)) {
      throw Error("malformed alignment item '" + item + "' on line " +
                  std::to_string(line_number));
    }
    if (s < 1 || s > pair.source_length() || t < 1 || t > pair.target_length()) {
      throw Error("link '" + item + "' out of bounds for a " +
                  std::to_string(pair.source_length()) + "x" +
                  std::to_string(pair.target_length()) + " pair on line " +
                  std::to_string(line_number));
    }
    const Link link{s - 1, t - 1};
    if (item[sep] == '-') gold.sure.insert(link);
    gold.possible.insert(link);
  }
  return gold;
}

Corpus read_gold(std::istream& in, Corpus corpus) {
  const auto lines = read_lines(in);
  if (lines.size() != corpus.size()) {
    throw Error("gold file has " + std::to_string(lines.size()) + " lines but corpus has " +
                std::to_string(corpus.size()) + " pairs");
  }
  std::vector<GoldAlignment> gold;
  gold.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    gold.push_back(parse_gold_line(lines[k], corpus.pairs[k], k + 1));
  }
  corpus.gold = std::move(gold);
  return corpus;
}

Corpus load_gold(const std::filesystem::path& path, Corpus corpus) {
  auto in = open_input(path);
  return read_gold(in, std::move(corpus));
}

void write_alignments(const std::vector<Alignment>& alignments, std::ostream& out) {
  for (const auto& alignment : alignments) out << to_string(alignment) << '\n';
}

void save_alignments(const std::vector<Alignment>& alignments,
                     const std::filesystem::path& path) {
  auto out = open_output(path);
  write_alignments(alignments, out);
}

std::vector<Alignment> load_alignments(const std::filesystem::path& path,
                                       const Corpus& corpus) {
  const Corpus loaded = load_gold(path, Corpus{corpus.pairs, std::nullopt});
  std::vector<Alignment> out;
  out.reserve(loaded.size());
  for (const auto& g : *loaded.gold) out.push_back(g.possible);
  return out;
}

// ---------------------------------------------------------------- ttable io

TTable read_ttable(std::istream& in) {
  TTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const Sentence fields = tokenize(line);
    if (fields.empty()) continue;
    const std::string where = " on line " + std::to_string(line_number);
    if (fields.size() != 4 || (fields[0] != "F" && fields[0] != "B")) {
      throw Error("malformed ttable entry" + where + ": expected 'F|B source target prob'");
    }
    double prob = 0.0;
    const std::string& text = fields[3];
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), prob);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error("unparsable probability '" + text + "'" + where);
    }
    if (!(prob > 0.0 && prob <= 1.0)) {
      throw Error("probability " + text + " outside (0, 1]" + where);
    }
    // F: t(target | source) stored under forward[source]; B: t(source | target)
    // stored under backward[target]. Both list the source word first.
    const bool forward = fields[0] == "F";
    LexicalTable& dir = forward ? table.forward : table.backward;
    const std::string& given = forward ? fields[1] : fields[2];
    const std::string& word = forward ? fields[2] : fields[1];
    auto [_, inserted] = dir[given].emplace(word, prob);
    if (!inserted) {
      throw Error("duplicate ttable key (" + fields[0] + " " + fields[1] + " " + fields[2] +
                  ")" + where);
    }
  }
  return table;
}

TTable load_ttable(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_ttable(in);
}

void write_ttable(const TTable& table, std::ostream& out) {
  auto dump = [&out](const char* tag, const LexicalTable& dir, bool forward) {
    std::vector<std::tuple<std::string, std::string, double>> rows;
    for (const auto& [given, row] : dir) {
      for (const auto& [word, prob] : row) {
        if (forward) {
          rows.emplace_back(given, word, prob);
        } else {
          rows.emplace_back(word, given, prob);
        }
      }
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [source, target, prob] : rows) {
      out << tag << ' ' << source << ' ' << target << ' ' << std::setprecision(17) << prob
          << '\n';
    }
  };
  dump("F", table.forward, true);
  dump("B", table.backward, false);
}

void save_ttable(const TTable& table, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_ttable(table, out);
}

}  // namespace contralign
