#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dcfg/error.hpp"
#include "dcfg/sepword.hpp"

namespace dcfg {

enum class TermKind { Word, Sep, Nonterminal, Var, Concat, Intercalate };

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable connective tree over words, separators, nonterminals and (for
// multicontexts) ranked variables. Ranks are computed at construction;
// ill-ranked nodes are unrepresentable.
class Term {
 public:
  static TermPtr word(SepWord w) {
    if (w.rank() != 0)
      throw Error(Errc::RankMismatch, "word leaves must be separator-free: " + w.render());
    auto t = std::make_shared<Term>(Private{});
    t->kind_ = TermKind::Word;
    t->word_ = std::move(w);
    t->rank_ = 0;
    return t;
  }

  static TermPtr word(std::string_view text) { return word(SepWord::parse(text)); }

  static TermPtr sep() {
    auto t = std::make_shared<Term>(Private{});
    t->kind_ = TermKind::Sep;
    t->rank_ = 1;
    return t;
  }

  static TermPtr nonterminal(std::string name, int rank) {
    if (rank < 0) throw Error(Errc::RankMismatch, "negative nonterminal rank");
    auto t = std::make_shared<Term>(Private{});
    t->kind_ = TermKind::Nonterminal;
    t->name_ = std::move(name);
    t->rank_ = rank;
    return t;
  }

  static TermPtr var(int index, int rank) {
    if (rank < 0) throw Error(Errc::RankMismatch, "negative variable rank");
    auto t = std::make_shared<Term>(Private{});
    t->kind_ = TermKind::Var;
    t->var_ = index;
    t->rank_ = rank;
    return t;
  }

  static TermPtr concat(TermPtr left, TermPtr right) {
    auto t = std::make_shared<Term>(Private{});
    t->kind_ = TermKind::Concat;
    t->rank_ = left->rank() + right->rank();
    t->left_ = std::move(left);
    t->right_ = std::move(right);
    return t;
  }

  static TermPtr intercalate(int j, TermPtr left, TermPtr right) {
    if (j < 1 || j > left->rank())
      throw Error(Errc::IndexOutOfRank, "intercalation at gap " + std::to_string(j) +
                                            " of a rank-" + std::to_string(left->rank()) +
                                            " term");
    auto t = std::make_shared<Term>(Private{});
    t->kind_ = TermKind::Intercalate;
    t->gap_ = j;
    t->rank_ = left->rank() + right->rank() - 1;
    t->left_ = std::move(left);
    t->right_ = std::move(right);
    return t;
  }

  TermKind kind() const { return kind_; }
  int rank() const { return rank_; }
  const SepWord& leaf_word() const { return word_; }
  const std::string& nt_name() const { return name_; }
  int var_index() const { return var_; }
  int gap() const { return gap_; }
  const TermPtr& left() const { return left_; }
  const TermPtr& right() const { return right_; }
  bool is_leaf() const { return !left_; }

  std::string render() const {
    switch (kind_) {
      case TermKind::Word: return word_.empty() ? "eps" : word_.render();
      case TermKind::Sep: return "1";
      case TermKind::Nonterminal: return name_;
      case TermKind::Var: return "x" + std::to_string(var_);
      case TermKind::Concat: return "(" + left_->render() + " " + right_->render() + ")";
      case TermKind::Intercalate:
        return "(" + left_->render() + " @" + std::to_string(gap_) + " " + right_->render() + ")";
    }
    return "?";
  }

  struct Private {};
  explicit Term(Private) {}

 private:
  TermKind kind_ = TermKind::Word;
  SepWord word_;
  std::string name_;
  int var_ = 0;
  int gap_ = 0;
  int rank_ = 0;
  TermPtr left_, right_;
};

inline bool is_ground(const TermPtr& t) {
  if (t->kind() == TermKind::Nonterminal || t->kind() == TermKind::Var) return false;
  if (t->is_leaf()) return true;
  return is_ground(t->left()) && is_ground(t->right());
}

// Valuation of a ground term: leaves are themselves, concatenation and
// intercalation act on words.
inline SepWord eval(const TermPtr& t) {
  switch (t->kind()) {
    case TermKind::Word: return t->leaf_word();
    case TermKind::Sep: return sep_word();
    case TermKind::Nonterminal:
      throw Error(Errc::NotGround, "cannot evaluate nonterminal " + t->nt_name());
    case TermKind::Var:
      throw Error(Errc::NotGround, "cannot evaluate variable x" + std::to_string(t->var_index()));
    case TermKind::Concat: return eval(t->left()) + eval(t->right());
    case TermKind::Intercalate: return word_intercalate(eval(t->left()), t->gap(), eval(t->right()));
  }
  throw Error(Errc::NotGround, "corrupt term");
}

// True iff every subterm has rank <= k and the Tm_k connective side
// conditions hold.
inline bool check_k_correct(const TermPtr& t, int k) {
  if (t->rank() > k) return false;
  switch (t->kind()) {
    case TermKind::Concat:
      if (t->left()->rank() + t->right()->rank() > k) return false;
      break;
    case TermKind::Intercalate:
      if (t->gap() > k) return false;
      if (t->left()->rank() + t->right()->rank() > k + 1) return false;
      break;
    default:
      return true;
  }
  return check_k_correct(t->left(), k) && check_k_correct(t->right(), k);
}

// Variables of a multicontext in left-to-right occurrence order.
inline void collect_vars(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind() == TermKind::Var) {
    out.push_back(t);
    return;
  }
  if (!t->is_leaf()) {
    collect_vars(t->left(), out);
    collect_vars(t->right(), out);
  }
}

inline std::vector<TermPtr> collect_vars(const TermPtr& t) {
  std::vector<TermPtr> out;
  collect_vars(t, out);
  return out;
}

inline void collect_nonterminals(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind() == TermKind::Nonterminal) {
    out.push_back(t);
    return;
  }
  if (!t->is_leaf()) {
    collect_nonterminals(t->left(), out);
    collect_nonterminals(t->right(), out);
  }
}

inline std::vector<TermPtr> collect_nonterminals(const TermPtr& t) {
  std::vector<TermPtr> out;
  collect_nonterminals(t, out);
  return out;
}

// Substitute variables by terms of equal rank (map keyed by variable index).
inline TermPtr substitute_vars(const TermPtr& t, const std::map<int, TermPtr>& sub) {
  switch (t->kind()) {
    case TermKind::Var: {
      auto it = sub.find(t->var_index());
      if (it == sub.end()) return t;
      if (it->second->rank() != t->rank())
        throw Error(Errc::RankMismatch, "substitution changes the rank of x" +
                                            std::to_string(t->var_index()));
      return it->second;
    }
    case TermKind::Concat:
      return Term::concat(substitute_vars(t->left(), sub), substitute_vars(t->right(), sub));
    case TermKind::Intercalate:
      return Term::intercalate(t->gap(), substitute_vars(t->left(), sub),
                               substitute_vars(t->right(), sub));
    default:
      return t;
  }
}

inline TermPtr substitute_nonterminals(const TermPtr& t,
                                       const std::map<std::string, TermPtr>& sub) {
  switch (t->kind()) {
    case TermKind::Nonterminal: {
      auto it = sub.find(t->nt_name());
      if (it == sub.end()) return t;
      if (it->second->rank() != t->rank())
        throw Error(Errc::RankMismatch, "substitution changes the rank of " + t->nt_name());
      return it->second;
    }
    case TermKind::Concat:
      return Term::concat(substitute_nonterminals(t->left(), sub),
                          substitute_nonterminals(t->right(), sub));
    case TermKind::Intercalate:
      return Term::intercalate(t->gap(), substitute_nonterminals(t->left(), sub),
                               substitute_nonterminals(t->right(), sub));
    default:
      return t;
  }
}

// A word over Sigma_1 viewed as a term (right-combed concatenation).
inline TermPtr term_of_word(const SepWord& w) {
  if (w.empty()) return Term::word(SepWord());
  TermPtr acc;
  for (std::size_t idx = w.size(); idx-- > 0;) {
    TermPtr leaf = (w[idx] == kSep) ? Term::sep() : Term::word(SepWord({w[idx]}));
    acc = acc ? Term::concat(leaf, acc) : leaf;
  }
  return acc;
}

}  // namespace dcfg
