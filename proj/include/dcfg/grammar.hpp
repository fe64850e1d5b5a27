#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dcfg/error.hpp"
#include "dcfg/term.hpp"

namespace dcfg {

struct NontermDecl {
  std::string name;
  int rank = 0;
};

struct Rule {
  int lhs = -1;  // index into Grammar::nonterminals
  TermPtr rhs;
};

// A k-displacement context-free grammar <N, Sigma, P, S>.
struct Grammar {
  std::vector<Symbol> alphabet;
  int k = 0;
  std::vector<NontermDecl> nonterminals;
  int start = -1;
  std::vector<Rule> rules;

  int find_nonterminal(const std::string& name) const {
    for (std::size_t i = 0; i < nonterminals.size(); ++i)
      if (nonterminals[i].name == name) return static_cast<int>(i);
    return -1;
  }

  bool has_symbol(Symbol s) const {
    for (Symbol a : alphabet)
      if (a == s) return true;
    return false;
  }
};

namespace detail {

inline void check_rule_leaves(const Grammar& g, const TermPtr& t, const std::string& where,
                              std::vector<std::string>& out) {
  switch (t->kind()) {
    case TermKind::Word:
      for (Symbol s : t->leaf_word().symbols())
        if (!g.has_symbol(s))
          out.push_back(where + ": symbol '" + SepWord({s}).render() + "' is not in the alphabet");
      return;
    case TermKind::Var:
      out.push_back(where + ": variables are not allowed in grammar rules");
      return;
    case TermKind::Nonterminal: {
      int id = g.find_nonterminal(t->nt_name());
      if (id < 0)
        out.push_back(where + ": undefined nonterminal " + t->nt_name());
      else if (g.nonterminals[id].rank != t->rank())
        out.push_back(where + ": nonterminal " + t->nt_name() + " used with rank " +
                      std::to_string(t->rank()) + ", declared " +
                      std::to_string(g.nonterminals[id].rank));
      return;
    }
    case TermKind::Sep:
      return;
    default:
      check_rule_leaves(g, t->left(), where, out);
      check_rule_leaves(g, t->right(), where, out);
  }
}

}  // namespace detail

// Every violation is reported with rule provenance; an empty result means
// the grammar is valid.
inline std::vector<std::string> validate(const Grammar& g) {
  std::vector<std::string> out;
  if (g.k < 0) out.push_back("grammar: negative order k");
  std::set<std::string> names;
  for (const auto& nt : g.nonterminals) {
    if (!names.insert(nt.name).second) out.push_back("grammar: duplicate nonterminal " + nt.name);
    if (nt.rank < 0 || nt.rank > g.k)
      out.push_back("grammar: nonterminal " + nt.name + " has rank " + std::to_string(nt.rank) +
                    " outside 0.." + std::to_string(g.k));
  }
  if (g.start < 0 || g.start >= static_cast<int>(g.nonterminals.size())) {
    out.push_back("grammar: missing start symbol");
  } else if (g.nonterminals[g.start].rank != 0) {
    out.push_back("grammar: start symbol " + g.nonterminals[g.start].name +
                  " must have rank 0, has " + std::to_string(g.nonterminals[g.start].rank));
  }
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const Rule& r = g.rules[i];
    if (r.lhs < 0 || r.lhs >= static_cast<int>(g.nonterminals.size())) {
      out.push_back("rule #" + std::to_string(i + 1) + ": bad left side");
      continue;
    }
    const std::string where =
        "rule #" + std::to_string(i + 1) + " (" + g.nonterminals[r.lhs].name + ")";
    if (g.nonterminals[r.lhs].rank != r.rhs->rank())
      out.push_back(where + ": left side has rank " + std::to_string(g.nonterminals[r.lhs].rank) +
                    ", body has rank " + std::to_string(r.rhs->rank()));
    if (!check_k_correct(r.rhs, g.k))
      out.push_back(where + ": body is not " + std::to_string(g.k) + "-correct");
    detail::check_rule_leaves(g, r.rhs, where, out);
  }
  return out;
}

}  // namespace dcfg
