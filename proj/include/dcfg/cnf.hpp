#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dcfg/error.hpp"
#include "dcfg/grammar.hpp"

namespace dcfg {

// A rule of the normal form: A -> B C, A -> B @j C, A -> a (a in Sigma or
// the separator), or S -> eps.
struct CnfRule {
  enum Kind { Concat, Inter, Term, Eps } kind = Concat;
  int lhs = -1;
  int j = 0;
  int b = -1, c = -1;
  Symbol a = 0;

  auto tie() const { return std::tie(kind, lhs, j, b, c, a); }
  bool operator<(const CnfRule& o) const { return tie() < o.tie(); }
  bool operator==(const CnfRule& o) const { return tie() == o.tie(); }
};

struct CnfGrammar {
  std::vector<Symbol> alphabet;
  int k = 0;
  std::vector<NontermDecl> nonterminals;
  int start = -1;
  std::vector<CnfRule> rules;
};

namespace cnf_detail {

// Working rule set during conversion: binary, unit, terminal and epsilon
// rules over a growing nonterminal table.
struct WorkRule {
  enum Kind { Bin, Unit, Term, Eps } kind = Bin;
  int lhs = -1;
  bool inter = false;  // Bin: intercalation vs concatenation
  int j = 0;
  int b = -1, c = -1;
  Symbol a = 0;

  auto tie() const { return std::tie(kind, lhs, inter, j, b, c, a); }
  bool operator<(const WorkRule& o) const { return tie() < o.tie(); }
};

class Builder {
 public:
  explicit Builder(const Grammar& g) : src_(g) {
    for (const auto& nt : g.nonterminals) {
      used_names_.insert(nt.name);
      nts_.push_back(nt);
    }
    start_ = g.start;
  }

  CnfGrammar run() {
    int start = start_;
    bool start_in_rhs = false;
    for (const auto& r : src_.rules)
      for (const auto& occ : collect_nonterminals(r.rhs))
        if (src_.find_nonterminal(occ->nt_name()) == start) start_in_rhs = true;
    if (start_in_rhs) {
      int fresh_start = fresh_nt(0);
      for (const auto& r : src_.rules)
        if (r.lhs == start) lower_rule(fresh_start, r.rhs);
      start = fresh_start;
    }
    for (const auto& r : src_.rules) lower_rule(r.lhs, r.rhs);

    eliminate_epsilon(start);
    eliminate_units();
    return finish(start);
  }

 private:
  int rank_of(int nt) const { return nts_[nt].rank; }

  int fresh_nt(int rank) {
    std::string name;
    do {
      name = "X" + std::to_string(counter_++);
    } while (used_names_.count(name));
    used_names_.insert(name);
    nts_.push_back({name, rank});
    return static_cast<int>(nts_.size()) - 1;
  }

  void add(WorkRule r) {
    if (rule_set_.insert(r).second) rules_.push_back(r);
  }

  // --- terminal isolation + binarization -------------------------------

  int nt_for_word(const SepWord& w) {
    auto it = word_nts_.find(w);
    if (it != word_nts_.end()) return it->second;
    int id = fresh_nt(w.rank());
    word_nts_.emplace(w, id);
    spell_word(id, w);
    return id;
  }

  void spell_word(int lhs, const SepWord& w) {
    if (w.empty()) {
      add({WorkRule::Eps, lhs});
    } else if (w.size() == 1) {
      add({WorkRule::Term, lhs, false, 0, -1, -1, w[0]});
    } else {
      SepWord head({w[0]});
      SepWord tail(std::vector<Symbol>(w.symbols().begin() + 1, w.symbols().end()));
      add({WorkRule::Bin, lhs, false, 0, nt_for_word(head), nt_for_word(tail)});
    }
  }

  // Lower a term to a nonterminal operand; maximal ground subterms collapse
  // to their value and structurally identical bodies share one nonterminal.
  int lower_operand(const TermPtr& t) {
    if (is_ground(t)) return nt_for_word(eval(t));
    if (t->kind() == TermKind::Nonterminal) return src_.find_nonterminal(t->nt_name());
    int b = lower_operand(t->left());
    int c = lower_operand(t->right());
    std::tuple<bool, int, int, int> key{t->kind() == TermKind::Intercalate, t->gap(), b, c};
    auto it = bin_nts_.find(key);
    if (it != bin_nts_.end()) return it->second;
    int id = fresh_nt(t->rank());
    bin_nts_.emplace(key, id);
    add({WorkRule::Bin, id, t->kind() == TermKind::Intercalate, t->gap(), b, c});
    return id;
  }

  void lower_rule(int lhs, const TermPtr& body) {
    if (is_ground(body)) {
      spell_word(lhs, eval(body));
    } else if (body->kind() == TermKind::Nonterminal) {
      add({WorkRule::Unit, lhs, false, 0, src_.find_nonterminal(body->nt_name())});
    } else {
      int b = lower_operand(body->left());
      int c = lower_operand(body->right());
      add({WorkRule::Bin, lhs, body->kind() == TermKind::Intercalate, body->gap(), b, c});
    }
  }

  // --- epsilon elimination ----------------------------------------------

  // A derives 1^rank(A)?  For rank-0 nonterminals this is nullability.
  std::vector<bool> sep_derivable() const {
    std::vector<bool> sep(nts_.size(), false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules_) {
        if (sep[r.lhs]) continue;
        bool now = false;
        switch (r.kind) {
          case WorkRule::Eps: now = true; break;
          case WorkRule::Term: now = (r.a == kSep); break;
          case WorkRule::Unit: now = sep[r.b]; break;
          case WorkRule::Bin: now = sep[r.b] && sep[r.c]; break;
        }
        if (now) {
          sep[r.lhs] = true;
          changed = true;
        }
      }
    }
    return sep;
  }

  // Nonterminal deriving L(B) with the j-th separator of every word erased.
  int erase_nt(int b, int j) {
    auto key = std::make_pair(b, j);
    auto it = erase_nts_.find(key);
    if (it != erase_nts_.end()) return it->second;
    if (j < 1 || j > rank_of(b))
      throw Error(Errc::IndexOutOfRank, "separator erasure out of rank");
    int id = fresh_nt(rank_of(b) - 1);
    erase_nts_.emplace(key, id);
    return id;
  }

  // The image of one of B's rules under erasure of B's j-th separator.
  bool erase_image(const WorkRule& r, int j, int d) {
    switch (r.kind) {
      case WorkRule::Eps:
        return false;  // rank 0, no separator to erase
      case WorkRule::Term:
        if (r.a != kSep) return false;
        add({WorkRule::Eps, d});
        return true;
      case WorkRule::Unit:
        add({WorkRule::Unit, d, false, 0, erase_nt(r.b, j)});
        return true;
      case WorkRule::Bin: {
        int rb = rank_of(r.b), rc = rank_of(r.c);
        if (!r.inter) {
          if (j <= rb)
            add({WorkRule::Bin, d, false, 0, erase_nt(r.b, j), r.c});
          else
            add({WorkRule::Bin, d, false, 0, r.b, erase_nt(r.c, j - rb)});
        } else {
          // result separators: b's below the gap, then c's, then b's above
          int l = r.j;
          if (j <= l - 1)
            add({WorkRule::Bin, d, true, l - 1, erase_nt(r.b, j), r.c});
          else if (j <= l - 1 + rc)
            add({WorkRule::Bin, d, true, l, r.b, erase_nt(r.c, j - l + 1)});
          else
            add({WorkRule::Bin, d, true, l, erase_nt(r.b, j - rc + 1), r.c});
        }
        return true;
      }
    }
    return false;
  }

  void eliminate_epsilon(int start) {
    // Fixpoint: dropped-child variants may involve erasure nonterminals,
    // whose rules are images of the source nonterminal's rules, which may
    // themselves grow.
    bool changed = true;
    while (changed) {
      changed = false;
      auto sep = sep_derivable();
      std::size_t before = rules_.size();
      std::vector<WorkRule> snapshot = rules_;
      for (const auto& r : snapshot) {
        if (r.kind != WorkRule::Bin) continue;
        bool b_null = rank_of(r.b) == 0 && sep[r.b];
        bool c_null = rank_of(r.c) == 0 && sep[r.c];
        if (!r.inter) {
          if (c_null) add({WorkRule::Unit, r.lhs, false, 0, r.b});
          if (b_null) add({WorkRule::Unit, r.lhs, false, 0, r.c});
        } else if (c_null) {
          add({WorkRule::Unit, r.lhs, false, 0, erase_nt(r.b, r.j)});
        }
      }
      for (const auto& [key, d] : std::map<std::pair<int, int>, int>(erase_nts_)) {
        std::vector<WorkRule> source;
        for (const auto& r : rules_)
          if (r.lhs == key.first) source.push_back(r);
        for (const auto& r : source) erase_image(r, key.second, d);
      }
      if (rules_.size() != before) changed = true;
    }
    start_nullable_ = sep_derivable()[start];
    std::vector<WorkRule> kept;
    for (const auto& r : rules_)
      if (r.kind != WorkRule::Eps) kept.push_back(r);
    rules_ = std::move(kept);
  }

  // --- unit elimination ---------------------------------------------------

  void eliminate_units() {
    const int n = static_cast<int>(nts_.size());
    std::vector<std::set<int>> reach(n);
    for (int a = 0; a < n; ++a) reach[a].insert(a);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules_) {
        if (r.kind != WorkRule::Unit) continue;
        for (int a = 0; a < n; ++a)
          if (reach[a].count(r.lhs) && reach[a].insert(r.b).second) changed = true;
      }
    }
    std::vector<WorkRule> out;
    std::set<WorkRule> out_set;
    for (int a = 0; a < n; ++a) {
      for (int b : reach[a]) {
        for (const auto& r : rules_) {
          if (r.lhs != b || r.kind == WorkRule::Unit) continue;
          WorkRule copy = r;
          copy.lhs = a;
          if (out_set.insert(copy).second) out.push_back(copy);
        }
      }
    }
    rules_ = std::move(out);
  }

  // --- cleanup and final shape ---------------------------------------------

  CnfGrammar finish(int start) {
    const int n = static_cast<int>(nts_.size());
    std::vector<bool> productive(n, false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules_) {
        if (productive[r.lhs]) continue;
        bool now = (r.kind == WorkRule::Term) ||
                   (r.kind == WorkRule::Bin && productive[r.b] && productive[r.c]);
        if (now) {
          productive[r.lhs] = true;
          changed = true;
        }
      }
    }
    std::vector<bool> reachable(n, false);
    reachable[start] = true;
    changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules_) {
        if (!reachable[r.lhs] || r.kind != WorkRule::Bin) continue;
        if (productive[r.b] && productive[r.c]) {
          if (!reachable[r.b]) { reachable[r.b] = true; changed = true; }
          if (!reachable[r.c]) { reachable[r.c] = true; changed = true; }
        }
      }
    }

    CnfGrammar out;
    out.alphabet = src_.alphabet;
    out.k = src_.k;
    std::vector<int> remap(n, -1);
    auto place = [&](int id) {
      if (remap[id] < 0) {
        remap[id] = static_cast<int>(out.nonterminals.size());
        out.nonterminals.push_back(nts_[id]);
      }
      return remap[id];
    };
    out.start = place(start);
    for (const auto& r : rules_) {
      if (!reachable[r.lhs] || !productive[r.lhs]) continue;
      if (r.kind == WorkRule::Bin && (!productive[r.b] || !productive[r.c])) continue;
      CnfRule cr;
      cr.lhs = place(r.lhs);
      if (r.kind == WorkRule::Term) {
        cr.kind = CnfRule::Term;
        cr.a = r.a;
      } else {
        cr.kind = r.inter ? CnfRule::Inter : CnfRule::Concat;
        cr.j = r.j;
        cr.b = place(r.b);
        cr.c = place(r.c);
      }
      out.rules.push_back(cr);
    }
    if (start_nullable_) out.rules.push_back({CnfRule::Eps, out.start});
    return out;
  }

  const Grammar& src_;
  std::vector<NontermDecl> nts_;
  std::set<std::string> used_names_;
  int counter_ = 1;
  int start_ = -1;
  bool start_nullable_ = false;
  std::vector<WorkRule> rules_;
  std::set<WorkRule> rule_set_;
  std::map<SepWord, int> word_nts_;
  std::map<std::tuple<bool, int, int, int>, int> bin_nts_;
  std::map<std::pair<int, int>, int> erase_nts_;
};

}  // namespace cnf_detail

// Chomsky-style normal form: terminal isolation, binarization, generalized
// epsilon elimination (a separator intercalated with an empty-deriving
// nonterminal is rebuilt through separator-erasure nonterminals), unit
// elimination, unreachable/unproductive cleanup.
inline CnfGrammar to_cnf(const Grammar& g) {
  return cnf_detail::Builder(g).run();
}

// View a CNF grammar as a plain grammar (used by the enumeration oracle and
// by serialization).
inline Grammar cnf_to_grammar(const CnfGrammar& g) {
  Grammar out;
  out.alphabet = g.alphabet;
  out.k = g.k;
  out.nonterminals = g.nonterminals;
  out.start = g.start;
  auto nt_term = [&](int id) {
    return Term::nonterminal(g.nonterminals[id].name, g.nonterminals[id].rank);
  };
  for (const auto& r : g.rules) {
    switch (r.kind) {
      case CnfRule::Concat:
        out.rules.push_back({r.lhs, Term::concat(nt_term(r.b), nt_term(r.c))});
        break;
      case CnfRule::Inter:
        out.rules.push_back({r.lhs, Term::intercalate(r.j, nt_term(r.b), nt_term(r.c))});
        break;
      case CnfRule::Term:
        out.rules.push_back(
            {r.lhs, r.a == kSep ? Term::sep() : Term::word(SepWord({r.a}))});
        break;
      case CnfRule::Eps:
        out.rules.push_back({r.lhs, Term::word(SepWord())});
        break;
    }
  }
  return out;
}

// CNF shape check for grammars loaded from files.
inline bool is_cnf_shaped(const Grammar& g, std::vector<CnfRule>* rules_out = nullptr) {
  std::vector<CnfRule> rules;
  for (const auto& r : g.rules) {
    CnfRule cr;
    cr.lhs = r.lhs;
    const TermPtr& t = r.rhs;
    if (t->kind() == TermKind::Word && t->leaf_word().empty()) {
      if (r.lhs != g.start) return false;
      cr.kind = CnfRule::Eps;
    } else if (t->kind() == TermKind::Word && t->leaf_word().size() == 1) {
      cr.kind = CnfRule::Term;
      cr.a = t->leaf_word()[0];
    } else if (t->kind() == TermKind::Sep) {
      cr.kind = CnfRule::Term;
      cr.a = kSep;
    } else if ((t->kind() == TermKind::Concat || t->kind() == TermKind::Intercalate) &&
               t->left()->kind() == TermKind::Nonterminal &&
               t->right()->kind() == TermKind::Nonterminal) {
      int b = g.find_nonterminal(t->left()->nt_name());
      int c = g.find_nonterminal(t->right()->nt_name());
      if (b == g.start || c == g.start) return false;
      cr.kind = t->kind() == TermKind::Concat ? CnfRule::Concat : CnfRule::Inter;
      cr.j = t->gap();
      cr.b = b;
      cr.c = c;
    } else {
      return false;
    }
    rules.push_back(cr);
  }
  if (rules_out) *rules_out = std::move(rules);
  return true;
}

inline CnfGrammar cnf_of_grammar(const Grammar& g) {
  std::vector<CnfRule> rules;
  if (is_cnf_shaped(g, &rules)) {
    CnfGrammar out;
    out.alphabet = g.alphabet;
    out.k = g.k;
    out.nonterminals = g.nonterminals;
    out.start = g.start;
    out.rules = std::move(rules);
    return out;
  }
  return to_cnf(g);
}

}  // namespace dcfg
