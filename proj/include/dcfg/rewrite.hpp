#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcfg/error.hpp"
#include "dcfg/term.hpp"

namespace dcfg {

// One of the eight ground-multicontext equivalences, applied left-to-right
// or right-to-left. `gap` is only consulted by the reversed direction of
// rules 7/8, whose right sides do not determine the intercalation index.
struct RewriteRule {
  int id = 1;          // 1..8
  bool reversed = false;
  int gap = 1;
};

namespace detail {

[[noreturn]] inline void not_applicable(int id, const std::string& why) {
  throw Error(Errc::RuleNotApplicable, "rule " + std::to_string(id) + ": " + why);
}

inline TermPtr apply_rule_here(const TermPtr& t, const RewriteRule& r) {
  const int id = r.id;
  auto need = [&](bool cond, const char* why) {
    if (!cond) not_applicable(id, why);
  };
  if (!r.reversed) {
    switch (id) {
      case 1: {  // (x1 x2) x3 ~ x1 (x2 x3)
        need(t->kind() == TermKind::Concat && t->left()->kind() == TermKind::Concat,
             "expected (x1 x2) x3");
        auto a = t->left()->left(), b = t->left()->right(), c = t->right();
        return Term::concat(a, Term::concat(b, c));
      }
      case 2: {  // (x1 x2) @j x3 ~ (x1 @j x3) x2, j <= rk(x1)
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Concat,
             "expected (x1 x2) @j x3");
        auto a = t->left()->left(), b = t->left()->right(), c = t->right();
        need(t->gap() <= a->rank(), "j <= rk(x1) fails");
        return Term::concat(Term::intercalate(t->gap(), a, c), b);
      }
      case 3: {  // (x1 x2) @j x3 ~ x1 (x2 @{j-rk(x1)} x3), rk(x1) < j
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Concat,
             "expected (x1 x2) @j x3");
        auto a = t->left()->left(), b = t->left()->right(), c = t->right();
        need(t->gap() > a->rank(), "rk(x1) < j fails");
        return Term::concat(a, Term::intercalate(t->gap() - a->rank(), b, c));
      }
      case 4: {  // (x1 @l x2) @j x3 ~ (x1 @j x3) @{l+rk(x3)-1} x2, j < l
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Intercalate,
             "expected (x1 @l x2) @j x3");
        auto a = t->left()->left(), b = t->left()->right(), c = t->right();
        int l = t->left()->gap(), j = t->gap();
        need(j < l, "j < l fails");
        return Term::intercalate(l + c->rank() - 1, Term::intercalate(j, a, c), b);
      }
      case 5: {  // (x1 @l x2) @j x3 ~ x1 @l (x2 @{j-l+1} x3), l <= j < l+rk(x2)
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Intercalate,
             "expected (x1 @l x2) @j x3");
        auto a = t->left()->left(), b = t->left()->right(), c = t->right();
        int l = t->left()->gap(), j = t->gap();
        need(l <= j && j < l + b->rank(), "l <= j < l + rk(x2) fails");
        return Term::intercalate(l, a, Term::intercalate(j - l + 1, b, c));
      }
      case 6: {  // (x1 @l x2) @j x3 ~ (x1 @{j-rk(x2)+1} x3) @l x2, j >= l+rk(x2)
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Intercalate,
             "expected (x1 @l x2) @j x3");
        auto a = t->left()->left(), b = t->left()->right(), c = t->right();
        int l = t->left()->gap(), j = t->gap();
        need(j >= l + b->rank(), "j >= l + rk(x2) fails");
        return Term::intercalate(l, Term::intercalate(j - b->rank() + 1, a, c), b);
      }
      case 7: {  // 1 @1 x1 ~ x1
        need(t->kind() == TermKind::Intercalate && t->gap() == 1 &&
                 t->left()->kind() == TermKind::Sep,
             "expected 1 @1 x1");
        return t->right();
      }
      case 8: {  // x1 @j 1 ~ x1
        need(t->kind() == TermKind::Intercalate && t->right()->kind() == TermKind::Sep,
             "expected x1 @j 1");
        return t->left();
      }
    }
  } else {
    switch (id) {
      case 1: {
        need(t->kind() == TermKind::Concat && t->right()->kind() == TermKind::Concat,
             "expected x1 (x2 x3)");
        auto a = t->left(), b = t->right()->left(), c = t->right()->right();
        return Term::concat(Term::concat(a, b), c);
      }
      case 2: {
        need(t->kind() == TermKind::Concat && t->left()->kind() == TermKind::Intercalate,
             "expected (x1 @j x3) x2");
        auto a = t->left()->left(), c = t->left()->right(), b = t->right();
        return Term::intercalate(t->left()->gap(), Term::concat(a, b), c);
      }
      case 3: {
        need(t->kind() == TermKind::Concat && t->right()->kind() == TermKind::Intercalate,
             "expected x1 (x2 @m x3)");
        auto a = t->left(), b = t->right()->left(), c = t->right()->right();
        return Term::intercalate(t->right()->gap() + a->rank(), Term::concat(a, b), c);
      }
      case 4: {
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Intercalate,
             "expected (x1 @j x3) @m x2");
        auto a = t->left()->left(), c = t->left()->right(), b = t->right();
        int j = t->left()->gap(), m = t->gap();
        int l = m - c->rank() + 1;
        need(j < l, "j < l fails");
        need(l >= 1 && l <= a->rank(), "recovered l out of range");
        return Term::intercalate(j, Term::intercalate(l, a, b), c);
      }
      case 5: {
        need(t->kind() == TermKind::Intercalate && t->right()->kind() == TermKind::Intercalate,
             "expected x1 @l (x2 @i x3)");
        auto a = t->left(), b = t->right()->left(), c = t->right()->right();
        int l = t->gap(), i = t->right()->gap();
        return Term::intercalate(i + l - 1, Term::intercalate(l, a, b), c);
      }
      case 6: {
        need(t->kind() == TermKind::Intercalate && t->left()->kind() == TermKind::Intercalate,
             "expected (x1 @m x3) @l x2");
        auto a = t->left()->left(), c = t->left()->right(), b = t->right();
        int m = t->left()->gap(), l = t->gap();
        int j = m + b->rank() - 1;
        need(j >= l + b->rank(), "j >= l + rk(x2) fails");
        return Term::intercalate(j, Term::intercalate(l, a, b), c);
      }
      case 7:
        return Term::intercalate(1, Term::sep(), t);
      case 8:
        need(r.gap >= 1 && r.gap <= t->rank(), "gap exceeds rank");
        return Term::intercalate(r.gap, t, Term::sep());
    }
  }
  not_applicable(id, "unknown rule id");
}

inline TermPtr replace_at(const TermPtr& t, std::span<const int> path, const TermPtr& repl) {
  if (path.empty()) return repl;
  if (t->is_leaf()) throw Error(Errc::NodeNotInTree, "path leaves the term");
  auto rest = path.subspan(1);
  if (path[0] == 0) {
    auto nl = replace_at(t->left(), rest, repl);
    return t->kind() == TermKind::Concat ? Term::concat(nl, t->right())
                                         : Term::intercalate(t->gap(), nl, t->right());
  }
  auto nr = replace_at(t->right(), rest, repl);
  return t->kind() == TermKind::Concat ? Term::concat(t->left(), nr)
                                       : Term::intercalate(t->gap(), t->left(), nr);
}

inline TermPtr subterm_at(const TermPtr& t, std::span<const int> path) {
  if (path.empty()) return t;
  if (t->is_leaf()) throw Error(Errc::NodeNotInTree, "path leaves the term");
  return subterm_at(path[0] == 0 ? t->left() : t->right(), path.subspan(1));
}

}  // namespace detail

inline TermPtr apply_rule(const TermPtr& t, const RewriteRule& rule, std::span<const int> path) {
  TermPtr sub = detail::subterm_at(t, path);
  return detail::replace_at(t, path, detail::apply_rule_here(sub, rule));
}

inline TermPtr apply_rule(const TermPtr& t, const RewriteRule& rule,
                          std::initializer_list<int> path) {
  return apply_rule(t, rule, std::span<const int>(path.begin(), path.size()));
}

namespace detail {

struct Occurrence {
  std::vector<int> path;
  int depth = 0;
};

// Maximal rank among internal (binary) nodes; 0 if none.
inline int max_internal_rank(const TermPtr& t) {
  if (t->is_leaf()) return 0;
  return std::max({t->rank(), max_internal_rank(t->left()), max_internal_rank(t->right())});
}

// Preorder search for the minimal-depth (ties: leftmost) internal node of
// rank K.
inline bool find_heavy(const TermPtr& t, int K, std::vector<int>& path,
                       std::optional<Occurrence>& best) {
  if (t->is_leaf()) return false;
  if (t->rank() == K) {
    if (!best || static_cast<int>(path.size()) < best->depth) {
      best = Occurrence{path, static_cast<int>(path.size())};
    }
    // preorder guarantees leftmost among equal depths seen first
  }
  path.push_back(0);
  find_heavy(t->left(), K, path, best);
  path.back() = 1;
  find_heavy(t->right(), K, path, best);
  path.pop_back();
  return best.has_value();
}

// One Appendix-A reduction step at the parent (which must have the shape
// C1 @j E with heavy C1 and rank-0 E).
inline TermPtr reduce_heavy_parent(const TermPtr& parent) {
  if (parent->kind() != TermKind::Intercalate || parent->right()->rank() != 0)
    throw Error(Errc::RuleNotApplicable, "heavy node parent is not @j with a rank-0 sibling");
  const TermPtr& c1 = parent->left();
  const TermPtr& e = parent->right();
  const int j = parent->gap();
  if (c1->kind() == TermKind::Concat) {
    auto c3 = c1->left(), c4 = c1->right();
    if (j <= c3->rank()) return Term::concat(Term::intercalate(j, c3, e), c4);
    return Term::concat(c3, Term::intercalate(j - c3->rank(), c4, e));
  }
  if (c1->kind() == TermKind::Intercalate) {
    auto c3 = c1->left(), c4 = c1->right();
    const int l = c1->gap();
    if (j < l) return Term::intercalate(l - 1, Term::intercalate(j, c3, e), c4);
    if (j < l + c4->rank())
      return Term::intercalate(l, c3, Term::intercalate(j - l + 1, c4, e));
    return Term::intercalate(l, Term::intercalate(j - c4->rank() + 1, c3, e), c4);
  }
  throw Error(Errc::RuleNotApplicable, "heavy node is not internal");
}

// Erase identity intercalations 1 @1 E (the k=0 tail of the procedure).
inline TermPtr strip_identity_intercalations(const TermPtr& t) {
  if (t->is_leaf()) return t;
  auto l = strip_identity_intercalations(t->left());
  auto r = strip_identity_intercalations(t->right());
  if (t->kind() == TermKind::Intercalate && t->gap() == 1 && l->kind() == TermKind::Sep) return r;
  if (t->kind() == TermKind::Concat) return Term::concat(l, r);
  return Term::intercalate(t->gap(), l, r);
}

inline void check_essential(const TermPtr& t, int k, const TermPtr& root) {
  if (t == root && t->rank() > k)
    throw Error(Errc::NotEssential, "root rank " + std::to_string(t->rank()) + " exceeds " +
                                        std::to_string(k));
  if ((t->kind() == TermKind::Var || t->kind() == TermKind::Nonterminal) && t->rank() > k)
    throw Error(Errc::NotEssential, "leaf of rank " + std::to_string(t->rank()) + " exceeds " +
                                        std::to_string(k));
  if (!t->is_leaf()) {
    check_essential(t->left(), k, root);
    check_essential(t->right(), k, root);
  }
}

}  // namespace detail

// Turn a k-essential multicontext into an equivalent k-correct one. The
// descent repeatedly picks a minimal-depth heaviest internal node and pushes
// the rank-0 sibling of its parent inside via the Lemma-1 equivalences.
inline TermPtr normalize_k_correct(const TermPtr& c, int k) {
  detail::check_essential(c, k, c);
  TermPtr t = c;
  for (;;) {
    int K = detail::max_internal_rank(t);
    if (K <= k) break;
    std::vector<int> scratch;
    std::optional<detail::Occurrence> heavy;
    detail::find_heavy(t, K, scratch, heavy);
    if (!heavy) break;
    std::vector<int> parent_path = heavy->path;
    if (parent_path.empty())
      throw Error(Errc::NotEssential, "heavy node at root despite essential input");
    parent_path.pop_back();
    TermPtr parent = detail::subterm_at(t, parent_path);
    t = detail::replace_at(t, parent_path, detail::reduce_heavy_parent(parent));
  }
  if (k == 0) t = detail::strip_identity_intercalations(t);
  return t;
}

// Decide equivalence of two multicontexts by evaluating both at a generic
// point: each variable of rank l becomes g0 1 g1 ... 1 gl with globally
// distinct fresh letters (likewise each nonterminal name). Connective
// semantics are letter-wise, so agreement at the generic point implies
// agreement under every valuation.
inline bool equivalent(const TermPtr& c1, const TermPtr& c2) {
  auto signature = [](const TermPtr& c) {
    std::vector<std::pair<int, int>> sig;  // (var index, rank)
    for (const auto& v : collect_vars(c)) sig.emplace_back(v->var_index(), v->rank());
    std::sort(sig.begin(), sig.end());
    return sig;
  };
  if (signature(c1) != signature(c2))
    throw Error(Errc::VariableMismatch, "multicontexts have different variable sets");

  Symbol fresh = 256;
  std::map<int, TermPtr> var_sub;
  std::map<std::string, TermPtr> nt_sub;
  auto generic = [&fresh](int rank) {
    std::vector<Symbol> syms;
    for (int i = 0; i <= rank; ++i) {
      if (i > 0) syms.push_back(kSep);
      syms.push_back(fresh++);
    }
    return term_of_word(SepWord(std::move(syms)));
  };
  for (const TermPtr& c : {c1, c2}) {
    for (const auto& v : collect_vars(c))
      if (!var_sub.count(v->var_index())) var_sub[v->var_index()] = generic(v->rank());
    for (const auto& n : collect_nonterminals(c))
      if (!nt_sub.count(n->nt_name())) nt_sub[n->nt_name()] = generic(n->rank());
  }
  auto ground = [&](const TermPtr& c) {
    return eval(substitute_nonterminals(substitute_vars(c, var_sub), nt_sub));
  };
  return ground(c1) == ground(c2);
}

}  // namespace dcfg
