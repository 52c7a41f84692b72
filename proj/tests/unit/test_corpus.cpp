#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "contralign/corpus.hpp"
#include "contralign/error.hpp"

using namespace contralign;
namespace fs = std::filesystem;

namespace {

Corpus parse(const std::string& source, const std::string& target) {
  std::istringstream s(source), t(target);
  return read_parallel(s, t);
}

SentencePair pair_of(int l, int m) {
  SentencePair p;
  for (int i = 0; i < l; ++i) p.source.push_back("s" + std::to_string(i));
  for (int j = 0; j < m; ++j) p.target.push_back("t" + std::to_string(j));
  return p;
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("contralign_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("alignment keeps a sorted set of links") {
  Alignment a;
  CHECK(a.insert({1, 0}));
  CHECK(a.insert({0, 2}));
  CHECK_FALSE(a.insert({1, 0}));
  CHECK(a.size() == 2);
  CHECK(a.links()[0] == Link{0, 2});
  CHECK(a.contains({1, 0}));
  CHECK(to_string(a) == "1-3 2-1");
  CHECK(a.erase({0, 2}));
  CHECK_FALSE(a.erase({0, 2}));
  CHECK(a.with({0, 0}) == Alignment{{0, 0}, {1, 0}});
  CHECK(Alignment{} < Alignment{{0, 0}});
  CHECK(Alignment(std::vector<Link>{{1, 1}, {0, 0}, {1, 1}}) == Alignment{{0, 0}, {1, 1}});
}

TEST_CASE("tokenize splits on whitespace runs") {
  CHECK(tokenize("a  b") == Sentence{"a", "b"});
  CHECK(tokenize("\t x \t y  ") == Sentence{"x", "y"});
  CHECK(tokenize("   ").empty());
}

TEST_CASE("read_parallel") {
  SUBCASE("one pair") {
    const Corpus c = parse("le chat\n", "the cat\n");
    REQUIRE(c.size() == 1);
    CHECK(c.pairs[0].source_length() == 2);
    CHECK(c.pairs[0].target_length() == 2);
    CHECK(c.pairs[0].id == 0);
    CHECK_FALSE(c.gold.has_value());
  }
  SUBCASE("ids follow file order") {
    const Corpus c = parse("a\nb\nc\n", "x\ny\nz\n");
    REQUIRE(c.size() == 3);
    CHECK(c.pairs[2].id == 2);
    CHECK(c.pairs[1].source == Sentence{"b"});
  }
  SUBCASE("line count mismatch names both counts") {
    const std::string msg = error_of([] { parse("a\nb\nc\n", "x\ny\n"); });
    CHECK(msg.find('3') != std::string::npos);
    CHECK(msg.find('2') != std::string::npos);
  }
  SUBCASE("empty line names its number") {
    const std::string msg = error_of([] { parse("a\n\n", "x\ny\n"); });
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK_THROWS_AS(parse("a\n", "  \n"), Error);
  }
  SUBCASE("write then read") {
    const Corpus c = parse("le  chat\nun chien noir\n", "the cat\na black dog\n");
    std::ostringstream s, t;
    write_parallel(c, s, t);
    CHECK(s.str() == "le chat\nun chien noir\n");
    const Corpus again = parse(s.str(), t.str());
    CHECK(again.pairs[1].target == c.pairs[1].target);
  }
}

TEST_CASE("gold lines") {
  const SentencePair p = pair_of(2, 3);
  SUBCASE("sure and possible") {
    const GoldAlignment g = parse_gold_line("1-1 2?3", p, 1);
    CHECK(g.sure == Alignment{{0, 0}});
    CHECK(g.possible == Alignment{{0, 0}, {1, 2}});
  }
  SUBCASE("empty line") {
    const GoldAlignment g = parse_gold_line("", p, 1);
    CHECK(g.sure.empty());
    CHECK(g.possible.empty());
  }
  SUBCASE("out of bounds names line and link") {
    const std::string msg = error_of([&] { parse_gold_line("5-1", p, 7); });
    CHECK(msg.find("5-1") != std::string::npos);
    CHECK(msg.find("line 7") != std::string::npos);
  }
  SUBCASE("malformed items") {
    CHECK_THROWS_AS(parse_gold_line("1x2", p, 1), Error);
    CHECK_THROWS_AS(parse_gold_line("1-", p, 1), Error);
    CHECK_THROWS_AS(parse_gold_line("-1-1", p, 1), Error);
    CHECK_THROWS_AS(parse_gold_line("0-1", p, 1), Error);
    CHECK_THROWS_AS(parse_gold_line("1-1a", p, 1), Error);
  }
  SUBCASE("sure implies possible") {
    const GoldAlignment g = parse_gold_line("2-2 1-3 2?1", p, 1);
    for (const Link& l : g.sure) CHECK(g.possible.contains(l));
    CHECK(g.possible.size() == 3);
  }
  SUBCASE("read_gold attaches one entry per pair") {
    Corpus c = parse("a b\nc\n", "x y z\nw\n");
    std::istringstream in("1-1 2?3\n\n");
    c = read_gold(in, std::move(c));
    REQUIRE(c.gold);
    CHECK(c.gold->size() == 2);
    CHECK((*c.gold)[1].sure.empty());
    std::istringstream short_in("1-1\n");
    CHECK_THROWS_AS(read_gold(short_in, parse("a\nb\n", "x\ny\n")), Error);
  }
}

TEST_CASE("ttable text format") {
  SUBCASE("forward entry") {
    std::istringstream in("F chat cat 0.9\n");
    const TTable t = read_ttable(in);
    CHECK(t.forward_prob("chat", "cat") == doctest::Approx(0.9));
    CHECK(t.backward_prob("cat", "chat") == 0.0);
    CHECK(t.size() == 1);
  }
  SUBCASE("backward entry lists the source word first") {
    std::istringstream in("B chat cat 0.4\n");
    const TTable t = read_ttable(in);
    CHECK(t.backward_prob("cat", "chat") == doctest::Approx(0.4));
    CHECK(t.backward.at("cat").at("chat") == doctest::Approx(0.4));
  }
  SUBCASE("range errors") {
    for (const char* line : {"F chat cat 1.5\n", "F chat cat 0\n", "F chat cat -0.1\n",
                             "F chat cat nan\n", "F chat cat x\n"}) {
      std::istringstream in(line);
      CHECK_THROWS_AS(read_ttable(in), Error);
    }
  }
  SUBCASE("malformed lines") {
    for (const char* line : {"F chat 0.5\n", "X chat cat 0.5\n", "F chat cat 0.5 extra\n"}) {
      std::istringstream in(line);
      CHECK_THROWS_AS(read_ttable(in), Error);
    }
  }
  SUBCASE("duplicate key names the key") {
    std::istringstream in("F chat cat 0.5\nF chat cat 0.25\n");
    const std::string msg = error_of([&] { read_ttable(in); });
    CHECK(msg.find("chat cat") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
  SUBCASE("round trip is exact") {
    TTable t;
    t.forward["chat"]["cat"] = 0.123456789012345678;
    t.forward["chien"]["dog"] = 1.0;
    t.backward["cat"]["chat"] = 1.0 / 3.0;
    std::ostringstream out;
    write_ttable(t, out);
    CHECK(out.str().rfind("F chat cat ", 0) == 0);
    std::istringstream in(out.str());
    CHECK(read_ttable(in) == t);
  }
}

TEST_CASE("file round trips") {
  TempDir dir;
  const Corpus c = parse("le chat\nun chien\n", "the cat\na dog\n");
  save_parallel(c, dir.path / "c.src", dir.path / "c.tgt");
  const Corpus loaded = load_parallel(dir.path / "c.src", dir.path / "c.tgt");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded.pairs[1].source == c.pairs[1].source);

  const std::vector<Alignment> alignments = {Alignment{{0, 0}, {1, 1}}, Alignment{}};
  save_alignments(alignments, dir.path / "a.txt");
  CHECK(load_alignments(dir.path / "a.txt", loaded) == alignments);

  const Corpus with_gold = load_gold(dir.path / "a.txt", loaded);
  CHECK((*with_gold.gold)[0].sure == alignments[0]);

  TTable t;
  t.forward["le"]["the"] = 0.75;
  t.backward["the"]["le"] = 0.5;
  save_ttable(t, dir.path / "t.txt");
  CHECK(load_ttable(dir.path / "t.txt") == t);

  const std::string msg = error_of([&] { load_parallel(dir.path / "missing.src", dir.path / "c.tgt"); });
  CHECK(msg.find("missing.src") != std::string::npos);
}
