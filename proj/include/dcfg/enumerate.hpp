#pragma once

#include <limits>
#include <set>
#include <vector>

#include "dcfg/error.hpp"
#include "dcfg/grammar.hpp"

namespace dcfg {

using Language = std::set<SepWord>;

namespace detail {

inline int nonsep_length(const SepWord& w) { return static_cast<int>(w.size()) - w.rank(); }

struct RuleShape {
  int lhs;
  std::vector<int> leaves;  // nonterminal ids in left-to-right order
  int base_len = 0;         // symbols contributed by word/sep leaves
  int base_nonsep = 0;
  int inter_count = 0;
  TermPtr body;
};

inline void scan_body(const Grammar& g, const TermPtr& t, RuleShape& shape) {
  switch (t->kind()) {
    case TermKind::Word:
      shape.base_len += static_cast<int>(t->leaf_word().size());
      shape.base_nonsep += static_cast<int>(t->leaf_word().size());
      return;
    case TermKind::Sep:
      shape.base_len += 1;
      return;
    case TermKind::Nonterminal:
      shape.leaves.push_back(g.find_nonterminal(t->nt_name()));
      return;
    case TermKind::Intercalate:
      shape.inter_count += 1;
      [[fallthrough]];
    case TermKind::Concat:
      scan_body(g, t->left(), shape);
      scan_body(g, t->right(), shape);
      return;
    default:
      throw Error(Errc::NotGround, "variables in grammar rule");
  }
}

// Evaluate a rule body with the i-th nonterminal leaf replaced by words[i].
inline SepWord eval_with(const TermPtr& t, const std::vector<const SepWord*>& words,
                         std::size_t& next) {
  switch (t->kind()) {
    case TermKind::Word: return t->leaf_word();
    case TermKind::Sep: return sep_word();
    case TermKind::Nonterminal: return *words[next++];
    case TermKind::Concat: {
      SepWord l = eval_with(t->left(), words, next);
      return l + eval_with(t->right(), words, next);
    }
    case TermKind::Intercalate: {
      SepWord l = eval_with(t->left(), words, next);
      SepWord r = eval_with(t->right(), words, next);
      return word_intercalate(l, t->gap(), r);
    }
    default:
      throw Error(Errc::NotGround, "variables in grammar rule");
  }
}

}  // namespace detail

// Exact bottom-up fixpoint of the derivability relation, truncated by word
// length. Intermediate words are kept while their non-separator length is
// within the bound: neither connective ever drops a non-separator symbol,
// so longer intermediates cannot contribute to short start words, while
// separator-only slack of up to rank(A) symbols can still be intercalated
// away. The reported sets are filtered to length <= max_len (length counts
// separator tokens).
inline std::vector<Language> enumerate(const Grammar& g, int max_len) {
  const int n = static_cast<int>(g.nonterminals.size());
  std::vector<detail::RuleShape> shapes;
  shapes.reserve(g.rules.size());
  for (const auto& r : g.rules) {
    detail::RuleShape s;
    s.lhs = r.lhs;
    s.body = r.rhs;
    detail::scan_body(g, r.rhs, s);
    shapes.push_back(std::move(s));
  }

  std::vector<std::vector<SepWord>> words(n);  // insertion order
  std::vector<std::set<SepWord>> seen(n);
  std::vector<int> min_nonsep(n, std::numeric_limits<int>::max());
  // New words are buffered per pass so that in-flight iteration over the
  // word vectors stays valid.
  std::vector<std::pair<int, SepWord>> pending;
  bool grew = false;
  auto add = [&](int nt, SepWord w) {
    if (detail::nonsep_length(w) > max_len) return;
    if (!seen[nt].insert(w).second) return;
    pending.emplace_back(nt, std::move(w));
    grew = true;
  };

  std::vector<const SepWord*> chosen;
  // Assignments where leaf `pivot` ranges over this pass's new words,
  // earlier leaves over old words, later ones over everything.
  auto combine = [&](const detail::RuleShape& s, const std::vector<int>& old_count,
                     std::size_t pivot, auto&& self, std::size_t leaf, int nonsep_so_far) -> void {
    if (leaf == s.leaves.size()) {
      std::size_t next = 0;
      add(s.lhs, detail::eval_with(s.body, chosen, next));
      return;
    }
    int remaining_min = 0;
    for (std::size_t m = leaf + 1; m < s.leaves.size(); ++m) {
      int mn = min_nonsep[s.leaves[m]];
      if (mn == std::numeric_limits<int>::max()) return;  // some later leaf has no words yet
      remaining_min += mn;
    }
    int nt = s.leaves[leaf];
    std::size_t lo = (leaf == pivot) ? static_cast<std::size_t>(old_count[nt]) : 0;
    std::size_t hi = (leaf < pivot) ? static_cast<std::size_t>(old_count[nt]) : words[nt].size();
    for (std::size_t i = lo; i < hi; ++i) {
      const SepWord& w = words[nt][i];
      int ns = nonsep_so_far + detail::nonsep_length(w);
      if (ns + remaining_min > max_len) continue;
      chosen[leaf] = &w;
      self(s, old_count, pivot, self, leaf + 1, ns);
    }
  };

  bool first_pass = true;
  std::vector<int> old_count(n, 0);
  do {
    grew = false;
    std::vector<int> cur_count(n);
    for (int i = 0; i < n; ++i) cur_count[i] = static_cast<int>(words[i].size());
    for (const auto& s : shapes) {
      if (s.base_nonsep > max_len) continue;
      chosen.assign(s.leaves.size(), nullptr);
      if (s.leaves.empty()) {
        if (first_pass) {
          std::size_t next = 0;
          add(s.lhs, detail::eval_with(s.body, chosen, next));
        }
        continue;
      }
      for (std::size_t pivot = 0; pivot < s.leaves.size(); ++pivot) {
        if (first_pass && pivot > 0) break;  // everything is new on the first pass
        combine(s, old_count, pivot, combine, 0, s.base_nonsep);
      }
    }
    for (auto& [nt, w] : pending) {
      min_nonsep[nt] = std::min(min_nonsep[nt], detail::nonsep_length(w));
      words[nt].push_back(std::move(w));
    }
    pending.clear();
    old_count = cur_count;
    first_pass = false;
  } while (grew);

  std::vector<Language> out(n);
  for (int i = 0; i < n; ++i)
    for (const auto& w : words[i])
      if (static_cast<int>(w.size()) <= max_len) out[i].insert(w);
  return out;
}

inline Language language(const Grammar& g, int max_len) {
  return enumerate(g, max_len)[g.start];
}

inline bool derives(const Grammar& g, int nt, const SepWord& w) {
  if (nt < 0 || nt >= static_cast<int>(g.nonterminals.size()))
    throw Error(Errc::RankMismatch, "unknown nonterminal");
  if (g.nonterminals[nt].rank != w.rank())
    throw Error(Errc::RankMismatch, "word rank " + std::to_string(w.rank()) +
                                        " does not match nonterminal rank " +
                                        std::to_string(g.nonterminals[nt].rank));
  auto langs = enumerate(g, static_cast<int>(w.size()));
  return langs[nt].count(w) > 0;
}

}  // namespace dcfg
