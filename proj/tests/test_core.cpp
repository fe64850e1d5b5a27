#include <catch_amalgamated.hpp>

#include "dcfg/sepword.hpp"
#include "dcfg/term.hpp"
#include "matchers.hpp"
#include "util.hpp"

using namespace dcfg;

TEST_CASE("rank counts separators") {
  CHECK(SepWord::parse("a1b11d").rank() == 3);
  CHECK(SepWord::parse("eps").rank() == 0);
  CHECK(SepWord::parse("abc").rank() == 0);
}

TEST_CASE("word_intercalate replaces the j-th separator") {
  CHECK(word_intercalate(SepWord::parse("a1b11d"), 2, SepWord::parse("c1c")).render() ==
        "a1bc1c1d");
  CHECK(word_intercalate(SepWord::parse("a1b1c"), 2, SepWord::parse("a1b")).render() ==
        "a1ba1bc");
  SepWord w = SepWord::parse("x1y1z");
  CHECK(word_intercalate(sep_word(), 1, w) == w);
  CHECK_THROWS_MATCHES(word_intercalate(SepWord::parse("a1b"), 2, SepWord::parse("c")), Error,
                       ErrcMatcher(Errc::IndexOutOfRank));
}

TEST_CASE("word_intercalate rank arithmetic") {
  std::mt19937 rng(1);
  for (int it = 0; it < 200; ++it) {
    int r1 = 1 + static_cast<int>(rng() % 3);
    int r2 = static_cast<int>(rng() % 3);
    SepWord w1 = testutil::rand_sepword(rng, r1);
    SepWord w2 = testutil::rand_sepword(rng, r2);
    int j = 1 + static_cast<int>(rng() % r1);
    CHECK(word_intercalate(w1, j, w2).rank() == r1 + r2 - 1);
  }
}

TEST_CASE("word_wrap replaces all separators simultaneously") {
  CHECK(word_wrap(SepWord::parse("a1b1c"),
                  std::vector<SepWord>{SepWord::parse("X"), SepWord::parse("Y")})
            .render() == "aXbYc");
  CHECK(word_wrap(SepWord::parse("ab"), std::vector<SepWord>{}).render() == "ab");
  CHECK(word_wrap(sep_word(), std::vector<SepWord>{SepWord::parse("q1r")}).render() == "q1r");
  CHECK_THROWS_MATCHES(word_wrap(SepWord::parse("a1b"), std::vector<SepWord>{}), Error,
                       ErrcMatcher(Errc::ArityMismatch));
}

TEST_CASE("word_wrap with bare separators is the identity") {
  std::mt19937 rng(2);
  for (int it = 0; it < 100; ++it) {
    int r = static_cast<int>(rng() % 4);
    SepWord w = testutil::rand_sepword(rng, r);
    std::vector<SepWord> fillers(r, sep_word());
    CHECK(word_wrap(w, fillers) == w);
  }
}

TEST_CASE("eval of the cube-grammar derivation term") {
  // (((a T) @1 (1 a)) @2 (1 a)) instantiated down to the base, then the
  // start wrapper: value must be (aba)^3.
  auto A = Term::word("a");
  auto B = Term::word("b");
  auto sep = Term::sep();
  auto t_base = Term::concat(sep, sep);  // T -> 1 1
  auto t_rule = [&](TermPtr t, TermPtr letter) {
    auto one_l = Term::concat(sep, letter);
    return Term::intercalate(2, Term::intercalate(1, Term::concat(letter, t), one_l),
                             Term::concat(sep, letter));
  };
  auto s_rule = [&](TermPtr t, TermPtr letter) {
    return Term::intercalate(1, Term::intercalate(1, Term::concat(letter, t), letter), letter);
  };
  auto t = t_base;
  t = t_rule(t, A);  // innermost application ends up rightmost in each copy
  t = t_rule(t, B);
  CHECK(eval(s_rule(t, A)).render() == "abaabaaba");
}

TEST_CASE("eval basics") {
  auto t = Term::intercalate(1, Term::concat(Term::word("a"), Term::sep()), Term::word("b"));
  CHECK(eval(t).render() == "ab");
  CHECK(eval(Term::word("abc")).render() == "abc");
  CHECK_THROWS_MATCHES(eval(Term::nonterminal("S", 0)), Error, ErrcMatcher(Errc::NotGround));
}

TEST_CASE("eval is a connective homomorphism") {
  std::mt19937 rng(3);
  for (int it = 0; it < 200; ++it) {
    int r1 = static_cast<int>(rng() % 3);
    int r2 = static_cast<int>(rng() % 3);
    auto t1 = testutil::rand_ground(rng, r1, 3);
    auto t2 = testutil::rand_ground(rng, r2, 3);
    CHECK(eval(Term::concat(t1, t2)) == eval(t1) + eval(t2));
    if (r1 >= 1) {
      int j = 1 + static_cast<int>(rng() % r1);
      CHECK(eval(Term::intercalate(j, t1, t2)) == word_intercalate(eval(t1), j, eval(t2)));
    }
  }
}

TEST_CASE("check_k_correct enforces subterm ranks and side conditions") {
  auto two_seps = Term::concat(Term::sep(), Term::sep());
  CHECK_FALSE(check_k_correct(Term::intercalate(1, two_seps, Term::word("a")), 1));
  CHECK(check_k_correct(Term::sep(), 1));
  for (const auto& r : testutil::g2().rules) CHECK(check_k_correct(r.rhs, 2));
}

TEST_CASE("word leaves may not contain separators") {
  CHECK_THROWS_MATCHES(Term::word(SepWord::parse("a1b")), Error,
                       ErrcMatcher(Errc::RankMismatch));
}
