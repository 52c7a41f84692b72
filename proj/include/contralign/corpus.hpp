#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "contralign/alignment.hpp"

namespace contralign {

using Sentence = std::vector<std::string>;

struct SentencePair {
  Sentence source;
  Sentence target;
  std::size_t id = 0;

  int source_length() const { return static_cast<int>(source.size()); }
  int target_length() const { return static_cast<int>(target.size()); }
  int cells() const { return source_length() * target_length(); }
};

/// Sure links S and possible links P, with S a subset of P.
struct GoldAlignment {
  Alignment sure;
  Alignment possible;
};

/// Conditioning word -> (generated word -> probability).
using LexicalTable =
    std::unordered_map<std::string, std::unordered_map<std::string, double>>;

/// Bidirectional lexical translation table.
///   forward:  t(target | source), keyed forward[source][target]
///   backward: t(source | target), keyed backward[target][source]
struct TTable {
  LexicalTable forward;
  LexicalTable backward;

  /// 0 when the entry is absent.
  double forward_prob(const std::string& source, const std::string& target) const;
  double backward_prob(const std::string& target, const std::string& source) const;
  std::size_t size() const;

  friend bool operator==(const TTable&, const TTable&) = default;
};

struct Corpus {
  std::vector<SentencePair> pairs;
  std::optional<std::vector<GoldAlignment>> gold;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// Splits on runs of whitespace.
Sentence tokenize(const std::string& line);

Corpus read_parallel(std::istream& source, std::istream& target);
Corpus load_parallel(const std::filesystem::path& source_path,
                     const std::filesystem::path& target_path);
void write_parallel(const Corpus& corpus, std::ostream& source, std::ostream& target);
void save_parallel(const Corpus& corpus, const std::filesystem::path& source_path,
                   const std::filesystem::path& target_path);

/// Parses one gold line ("s-t" sure, "s?t" possible-only, 1-based) against
/// a pair's bounds. `line_number` is only used in error messages.
GoldAlignment parse_gold_line(const std::string& line, const SentencePair& pair,
                              std::size_t line_number);
Corpus read_gold(std::istream& in, Corpus corpus);
Corpus load_gold(const std::filesystem::path& path, Corpus corpus);

/// One line per alignment, every link written as sure ("s-t").
void write_alignments(const std::vector<Alignment>& alignments, std::ostream& out);
void save_alignments(const std::vector<Alignment>& alignments,
                     const std::filesystem::path& path);
/// Reads a gold-format file where every link is taken as sure.
std::vector<Alignment> load_alignments(const std::filesystem::path& path,
                                       const Corpus& corpus);

/// "F s t p" sets t(t | s) = p, "B s t p" sets t(s | t) = p.
TTable read_ttable(std::istream& in);
TTable load_ttable(const std::filesystem::path& path);
/// Lines "F|B source target prob", F before B, each block sorted by
/// (source, target); 17 significant digits so a reload is exact.
void write_ttable(const TTable& table, std::ostream& out);
void save_ttable(const TTable& table, const std::filesystem::path& path);

/// Opens a file for reading, throwing Error naming the path on failure.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace contralign
