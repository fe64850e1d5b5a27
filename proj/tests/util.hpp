#pragma once

#include <random>
#include <string>
#include <vector>

#include "dcfg/enumerate.hpp"
#include "dcfg/grammar_io.hpp"
#include "dcfg/rewrite.hpp"

namespace testutil {

using namespace dcfg;

inline Grammar g1() { return load_grammar(std::string(GRAMMAR_DIR) + "/g1.dcfg"); }
inline Grammar g2() { return load_grammar(std::string(GRAMMAR_DIR) + "/g2.dcfg"); }

// Word over {a,b,c} with exactly `rank` separators at random places.
inline SepWord rand_sepword(std::mt19937& rng, int rank, int max_letters = 3) {
  int letters = static_cast<int>(rng() % (max_letters + 1));
  std::vector<Symbol> syms;
  for (int i = 0; i < letters; ++i) syms.push_back('a' + static_cast<Symbol>(rng() % 3));
  for (int i = 0; i < rank; ++i) {
    std::size_t pos = rng() % (syms.size() + 1);
    syms.insert(syms.begin() + pos, kSep);
  }
  return SepWord(std::move(syms));
}

// Ground term of the given rank with depth-bounded random structure.
inline TermPtr rand_ground(std::mt19937& rng, int rank, int depth) {
  if (depth <= 0 || rng() % 3 == 0) return term_of_word(rand_sepword(rng, rank));
  if (rng() % 2 == 0) {
    int r1 = static_cast<int>(rng() % (rank + 1));
    return Term::concat(rand_ground(rng, r1, depth - 1), rand_ground(rng, rank - r1, depth - 1));
  }
  int rl = 1 + static_cast<int>(rng() % (rank + 1));
  int rr = rank + 1 - rl;
  int j = 1 + static_cast<int>(rng() % rl);
  return Term::intercalate(j, rand_ground(rng, rl, depth - 1), rand_ground(rng, rr, depth - 1));
}

// Multicontext of the given rank whose variables and root stay within rank
// k while internal nodes may exceed it (k-essential, not k-correct).
inline TermPtr rand_essential(std::mt19937& rng, int rank, int depth, int k, int& next_var,
                              int max_internal) {
  bool must_split = rank > k;
  if (depth <= 0 || (!must_split && rng() % 3 == 0)) {
    // Variable leaves must stay within rank k; ground word leaves may not.
    if (!must_split && rng() % 2 == 0) return Term::var(next_var++, rank);
    return term_of_word(rand_sepword(rng, rank));
  }
  if (rng() % 2 == 0) {
    int hi = std::min(rank, max_internal);
    int r1 = static_cast<int>(rng() % (hi + 1));
    return Term::concat(rand_essential(rng, r1, depth - 1, k, next_var, max_internal),
                        rand_essential(rng, rank - r1, depth - 1, k, next_var, max_internal));
  }
  int rl = 1 + static_cast<int>(rng() % std::min(rank + 1, max_internal));
  int rr = rank + 1 - rl;
  int j = 1 + static_cast<int>(rng() % rl);
  return Term::intercalate(j, rand_essential(rng, rl, depth - 1, k, next_var, max_internal),
                           rand_essential(rng, rr, depth - 1, k, next_var, max_internal));
}

// Random rule body over the grammar's nonterminals: k-correct, matching the
// target rank, depth-bounded; rejection sampling keeps the generator simple.
inline TermPtr rand_body(std::mt19937& rng, const Grammar& g, int rank, int depth) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    TermPtr t = [&]() -> TermPtr {
      auto gen = [&](auto&& self, int r, int d) -> TermPtr {
        if (d <= 0 || rng() % 3 == 0) {
          // leaf: a nonterminal of matching rank if one exists, else a word
          std::vector<int> fit;
          for (std::size_t i = 0; i < g.nonterminals.size(); ++i)
            if (g.nonterminals[i].rank == r && static_cast<int>(i) != g.start)
              fit.push_back(static_cast<int>(i));
          if (!fit.empty() && rng() % 2 == 0) {
            const auto& nt = g.nonterminals[fit[rng() % fit.size()]];
            return Term::nonterminal(nt.name, nt.rank);
          }
          return term_of_word(rand_sepword(rng, r, 2));
        }
        if (rng() % 2 == 0) {
          int r1 = static_cast<int>(rng() % (r + 1));
          return Term::concat(self(self, r1, d - 1), self(self, r - r1, d - 1));
        }
        int rl = 1 + static_cast<int>(rng() % (r + 1));
        int rr = r + 1 - rl;
        int j = 1 + static_cast<int>(rng() % rl);
        return Term::intercalate(j, self(self, rl, d - 1), self(self, rr, d - 1));
      };
      return gen(gen, rank, depth);
    }();
    if (check_k_correct(t, g.k)) return t;
  }
  return term_of_word(rand_sepword(rng, rank, 2));
}

// Random valid grammar: k <= 2, a handful of nonterminals, every
// nonterminal has a ground base rule so nothing is vacuous.
inline Grammar rand_grammar(std::mt19937& rng, int k, int n_nts) {
  Grammar g;
  g.alphabet = {'a', 'b'};
  g.k = k;
  g.nonterminals.push_back({"S", 0});
  for (int i = 1; i < n_nts; ++i)
    g.nonterminals.push_back({"N" + std::to_string(i), static_cast<int>(rng() % (k + 1))});
  g.start = 0;
  for (int i = 0; i < n_nts; ++i) {
    int rank = g.nonterminals[i].rank;
    g.rules.push_back({i, term_of_word(rand_sepword(rng, rank, 2))});
    int extra = 1 + static_cast<int>(rng() % 2);
    for (int e = 0; e < extra; ++e) g.rules.push_back({i, rand_body(rng, g, rank, 3)});
  }
  return g;
}

// A random ground left side matching rewrite rule `id` (forward direction).
inline TermPtr rand_rule_lhs(std::mt19937& rng, int id) {
  auto g = [&](int rank) { return rand_ground(rng, rank, 2); };
  switch (id) {
    case 1:
      return Term::concat(Term::concat(g(rng() % 3), g(rng() % 3)), g(rng() % 3));
    case 2: {
      int r1 = 1 + static_cast<int>(rng() % 3);
      int j = 1 + static_cast<int>(rng() % r1);
      return Term::intercalate(j, Term::concat(g(r1), g(rng() % 3)), g(rng() % 3));
    }
    case 3: {
      int r1 = static_cast<int>(rng() % 2), r2 = 1 + static_cast<int>(rng() % 3);
      int j = r1 + 1 + static_cast<int>(rng() % r2);
      return Term::intercalate(j, Term::concat(g(r1), g(r2)), g(rng() % 3));
    }
    case 4: {
      int l = 2 + static_cast<int>(rng() % 2), j = 1 + static_cast<int>(rng() % (l - 1));
      int r1 = l + static_cast<int>(rng() % 2), r2 = 1 + static_cast<int>(rng() % 2);
      return Term::intercalate(j, Term::intercalate(l, g(r1), g(r2)), g(rng() % 3));
    }
    case 5: {
      int l = 1 + static_cast<int>(rng() % 2), r2 = 1 + static_cast<int>(rng() % 3);
      int j = l + static_cast<int>(rng() % r2);
      return Term::intercalate(
          j, Term::intercalate(l, g(l + static_cast<int>(rng() % 2)), g(r2)), g(rng() % 3));
    }
    case 6: {
      int l = 1 + static_cast<int>(rng() % 2), r2 = static_cast<int>(rng() % 2);
      int r1 = l + 1 + static_cast<int>(rng() % 2);
      int lo = l + r2, hi = r1 + r2 - 1;
      int j = lo + static_cast<int>(rng() % (hi - lo + 1));
      return Term::intercalate(j, Term::intercalate(l, g(r1), g(r2)), g(rng() % 3));
    }
    case 7:
      return Term::intercalate(1, Term::sep(), g(rng() % 3));
    case 8: {
      int r1 = 1 + static_cast<int>(rng() % 3);
      return Term::intercalate(1 + static_cast<int>(rng() % r1), g(r1), Term::sep());
    }
  }
  return nullptr;
}

// Instantiate the variables of a multicontext with random ground terms and
// evaluate (used to cross-check the generic-point equivalence decision).
inline SepWord eval_at_random_valuation(std::mt19937& rng, const TermPtr& c) {
  std::map<int, TermPtr> sub;
  for (const auto& v : collect_vars(c))
    if (!sub.count(v->var_index())) sub[v->var_index()] = rand_ground(rng, v->rank(), 3);
  return eval(substitute_vars(c, sub));
}

}  // namespace testutil
