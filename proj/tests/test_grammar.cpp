#include <catch_amalgamated.hpp>

#include "dcfg/cnf.hpp"
#include "dcfg/enumerate.hpp"
#include "dcfg/grammar_io.hpp"
#include "dcfg/parser.hpp"
#include "matchers.hpp"
#include "util.hpp"

using namespace dcfg;

namespace {

// w -> ww for every nonempty w over {a,b} up to the length bound.
Language squares_up_to(int max_len) {
  Language out;
  for (int n = 1; 2 * n <= max_len; ++n)
    for (int bits = 0; bits < (1 << n); ++bits) {
      std::string w;
      for (int i = 0; i < n; ++i) w += (bits >> i & 1) ? 'b' : 'a';
      out.insert(SepWord::parse(w + w));
    }
  return out;
}

Language cubes_up_to(int max_len) {
  Language out;
  for (int n = 1; 3 * n <= max_len; ++n)
    for (int bits = 0; bits < (1 << n); ++bits) {
      std::string w;
      for (int i = 0; i < n; ++i) w += (bits >> i & 1) ? 'b' : 'a';
      out.insert(SepWord::parse(w + w + w));
    }
  return out;
}

}  // namespace

TEST_CASE("fixture grammars validate cleanly") {
  CHECK(validate(testutil::g1()).empty());
  CHECK(validate(testutil::g2()).empty());
}

TEST_CASE("validate flags rank and correctness violations") {
  Grammar g = testutil::g2();
  g.k = 1;  // T has rank 2 > k and the bodies are no longer 1-correct
  CHECK_FALSE(validate(g).empty());

  Grammar h = testutil::g1();
  h.rules.push_back({h.find_nonterminal("S"), Term::sep()});  // rank 1 body for rank 0 lhs
  CHECK_FALSE(validate(h).empty());
}

TEST_CASE("enumerate matches the closed-form square language") {
  Grammar g = testutil::g1();
  Language got = language(g, 8);
  CHECK(got == squares_up_to(8));

  std::vector<std::string> four;
  for (const auto& w : language(g, 4)) four.push_back(w.render());
  CHECK(four == std::vector<std::string>{"aa", "aaaa", "abab", "baba", "bb", "bbbb"});
}

TEST_CASE("enumerate matches the closed-form cube language") {
  CHECK(language(testutil::g2(), 9) == cubes_up_to(9));
}

TEST_CASE("enumerate is monotone in the length bound") {
  Grammar g = testutil::g1();
  Language small = language(g, 6), big = language(g, 10);
  for (const auto& w : small) CHECK(big.count(w) == 1);
}

TEST_CASE("derives answers per-nonterminal membership") {
  Grammar g2 = testutil::g2();
  int t = g2.find_nonterminal("T");
  CHECK(derives(g2, t, SepWord::parse("11")));
  CHECK(derives(g2, t, SepWord::parse("a1a1a")));
  CHECK_FALSE(derives(g2, t, SepWord::parse("a1b1a")));
  CHECK_THROWS_MATCHES(derives(g2, t, SepWord::parse("ab")), Error,
                       ErrcMatcher(Errc::RankMismatch));
}

TEST_CASE("to_cnf produces well-shaped rules") {
  for (const Grammar& g : {testutil::g1(), testutil::g2()}) {
    CnfGrammar cnf = to_cnf(g);
    for (const auto& r : cnf.rules) {
      switch (r.kind) {
        case CnfRule::Concat:
          CHECK(r.b != cnf.start);
          CHECK(r.c != cnf.start);
          break;
        case CnfRule::Inter:
          CHECK(r.b != cnf.start);
          CHECK(r.c != cnf.start);
          CHECK(r.j >= 1);
          CHECK(r.j <= cnf.k);
          break;
        case CnfRule::Term:
          CHECK((r.a == kSep || g.has_symbol(r.a)));
          break;
        case CnfRule::Eps:
          CHECK(r.lhs == cnf.start);
          break;
      }
    }
    CHECK(is_cnf_shaped(cnf_to_grammar(cnf)));
  }
}

TEST_CASE("to_cnf preserves the language") {
  Grammar g1 = testutil::g1();
  CHECK(language(cnf_to_grammar(to_cnf(g1)), 8) == language(g1, 8));
  Grammar g2 = testutil::g2();
  CHECK(language(cnf_to_grammar(to_cnf(g2)), 9) == language(g2, 9));
}

TEST_CASE("to_cnf handles epsilon and separator-erasing rules") {
  // S -> (A @1 B), A -> a1a | 1, B -> eps-ish words: forces the erasure
  // machinery (the right operand of @ can derive the empty word).
  Grammar g = parse_grammar(
      "alphabet a b\n"
      "k 1\n"
      "start S\n"
      "nonterm S 0\n"
      "nonterm A 1\n"
      "nonterm B 0\n"
      "rule S -> (A @1 B)\n"
      "rule A -> (a 1 a) | 1\n"
      "rule B -> eps | b\n");
  REQUIRE(validate(g).empty());
  Language want = language(g, 6);
  CHECK(want.count(SepWord::parse("aa")) == 1);    // B -> eps inside A
  CHECK(want.count(SepWord::parse("eps")) == 1);   // A -> 1, B -> eps
  CnfGrammar cnf = to_cnf(g);
  CHECK(language(cnf_to_grammar(cnf), 6) == want);
  CHECK(recognize(cnf, std::string_view("")));
  CHECK(recognize(cnf, std::string_view("aba")));
  CHECK_FALSE(recognize(cnf, std::string_view("ab")));
}

TEST_CASE("serialize and parse round-trip") {
  for (const Grammar& g : {testutil::g1(), testutil::g2()}) {
    Grammar back = parse_grammar(serialize_grammar(g));
    CHECK(back.k == g.k);
    CHECK(back.alphabet == g.alphabet);
    REQUIRE(back.nonterminals.size() == g.nonterminals.size());
    CHECK(language(back, 8) == language(g, 8));
  }
}

TEST_CASE("parse_grammar reports malformed input") {
  CHECK_THROWS_MATCHES(parse_grammar("alphabet a\nk 1\n"), Error,
                       ErrcMatcher(Errc::FormatError));
  CHECK_THROWS_MATCHES(parse_grammar("alphabet a\nk 1\nstart S\nnonterm S 0\nrule S -> (a"),
                       Error, ErrcMatcher(Errc::FormatError));
  CHECK_THROWS_MATCHES(load_grammar("/nonexistent/file.dcfg"), Error,
                       ErrcMatcher(Errc::FormatError));
}

TEST_CASE("random grammars survive the normal-form pipeline") {
  std::mt19937 rng(21);
  for (int it = 0; it < 10; ++it) {
    Grammar g = testutil::rand_grammar(rng, 1 + static_cast<int>(rng() % 2), 3);
    REQUIRE(validate(g).empty());
    CnfGrammar cnf = to_cnf(g);
    CHECK(language(cnf_to_grammar(cnf), 5) == language(g, 5));
  }
}
