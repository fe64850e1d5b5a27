#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "dcfg/cnf.hpp"
#include "dcfg/derivation.hpp"
#include "dcfg/error.hpp"

namespace dcfg {
namespace chart_detail {

struct Back {
  int rule = -1;
  int left = -1, right = -1;  // antecedent item ids, -1 for axioms
  auto tie() const { return std::tie(rule, left, right); }
  bool operator<(const Back& o) const { return tie() < o.tie(); }
  bool operator==(const Back& o) const { return tie() == o.tie(); }
};

struct Item {
  int nt = -1;
  RangeVector rv;
  std::vector<Back> backs;  // discovery order; the first one is acyclic
};

class Chart {
 public:
  Chart(const CnfGrammar& g, const SepWord& input) : g_(g), n_(static_cast<int>(input.size())) {
    for (Symbol s : input.symbols())
      if (s == kSep) throw Error(Errc::SeparatorInInput, "input word contains a separator");
    build(input);
  }

  int find(int nt, const RangeVector& rv) const {
    auto it = index_.find({nt, rv});
    return it == index_.end() ? -1 : it->second;
  }

  int goal() const {
    RangeVector whole{{{0, n_}}};
    return find(g_.start, whole);
  }

  const Item& item(int id) const { return items_[id]; }
  const CnfGrammar& grammar() const { return g_; }

 private:
  void add(int nt, RangeVector rv, Back back) {
    auto [it, fresh] = index_.try_emplace({nt, std::move(rv)}, static_cast<int>(items_.size()));
    if (fresh) {
      Item item;
      item.nt = nt;
      item.rv = it->first.second;
      items_.push_back(std::move(item));
      agenda_.push_back(it->second);
      // Resource guard: distinct range vectors of a rank-l nonterminal are
      // bounded by (n+1)^{2(l+1)}.
      int l = g_.nonterminals[nt].rank;
      std::uint64_t bound = 1;
      for (int m = 0; m < 2 * (l + 1); ++m) bound *= static_cast<std::uint64_t>(n_ + 1);
      if (++per_nt_count_[nt] > bound)
        throw Error(Errc::FormatError, "chart item bound exceeded for " + g_.nonterminals[nt].name);
    }
    auto& backs = items_[it->second].backs;
    if (std::find(backs.begin(), backs.end(), back) == backs.end()) backs.push_back(back);
  }

  static RangeVector merge_concat(const RangeVector& b, const RangeVector& c) {
    RangeVector out;
    out.ranges.assign(b.ranges.begin(), b.ranges.end() - 1);
    out.ranges.emplace_back(b.ranges.back().first, c.ranges.front().second);
    out.ranges.insert(out.ranges.end(), c.ranges.begin() + 1, c.ranges.end());
    return out;
  }

  // Fill the j-th gap of b with c: requires c to start at the end of b's
  // segment j-1 and end at the start of segment j.
  static RangeVector merge_inter(const RangeVector& b, int j, const RangeVector& c) {
    RangeVector out;
    const auto& bs = b.ranges;
    const auto& cs = c.ranges;
    out.ranges.assign(bs.begin(), bs.begin() + (j - 1));
    if (cs.size() == 1) {
      out.ranges.emplace_back(bs[j - 1].first, bs[j].second);
    } else {
      out.ranges.emplace_back(bs[j - 1].first, cs.front().second);
      out.ranges.insert(out.ranges.end(), cs.begin() + 1, cs.end() - 1);
      out.ranges.emplace_back(cs.back().first, bs[j].second);
    }
    out.ranges.insert(out.ranges.end(), bs.begin() + j + 1, bs.end());
    return out;
  }

  void try_combine(int rule_idx, int b_id, int c_id) {
    const CnfRule& r = g_.rules[rule_idx];
    const RangeVector& b = items_[b_id].rv;
    const RangeVector& c = items_[c_id].rv;
    if (r.kind == CnfRule::Concat) {
      if (b.last_end() != c.first_start()) return;
      add(r.lhs, merge_concat(b, c), {rule_idx, b_id, c_id});
    } else {
      int j = r.j;
      if (c.first_start() != b.ranges[j - 1].second) return;
      if (c.last_end() != b.ranges[j].first) return;
      add(r.lhs, merge_inter(b, j, c), {rule_idx, b_id, c_id});
    }
  }

  void build(const SepWord& input) {
    for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) {
      const CnfRule& r = g_.rules[ri];
      if (r.kind == CnfRule::Term && r.a != kSep) {
        for (int i = 0; i < n_; ++i)
          if (input[i] == r.a) add(r.lhs, RangeVector{{{i, i + 1}}}, {static_cast<int>(ri)});
      } else if (r.kind == CnfRule::Term) {
        for (int i = 0; i <= n_; ++i)
          for (int j = i; j <= n_; ++j)
            add(r.lhs, RangeVector{{{i, i}, {j, j}}}, {static_cast<int>(ri)});
      } else if (r.kind == CnfRule::Eps && n_ == 0) {
        add(r.lhs, RangeVector{{{0, 0}}}, {static_cast<int>(ri)});
      }
    }
    while (!agenda_.empty()) {
      int id = agenda_.front();
      agenda_.pop_front();
      int nt = items_[id].nt;
      for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) {
        const CnfRule& r = g_.rules[ri];
        if (r.kind != CnfRule::Concat && r.kind != CnfRule::Inter) continue;
        if (r.b == nt) {
          // partner items known so far, in discovery order
          for (int c_id = 0; c_id < static_cast<int>(items_.size()); ++c_id)
            if (items_[c_id].nt == r.c) try_combine(static_cast<int>(ri), id, c_id);
        }
        if (r.c == nt) {
          for (int b_id = 0; b_id < static_cast<int>(items_.size()); ++b_id)
            if (items_[b_id].nt == r.b && b_id != id)
              try_combine(static_cast<int>(ri), b_id, id);
        }
      }
    }
  }

  const CnfGrammar& g_;
  int n_;
  std::vector<Item> items_;
  std::map<std::pair<int, RangeVector>, int> index_;
  std::map<int, std::uint64_t> per_nt_count_;
  std::deque<int> agenda_;
};

inline int build_tree(const Chart& chart, int item_id, DerivationTree& t) {
  const Item& it = chart.item(item_id);
  const Back& back = it.backs.front();  // first derivation: acyclic by discovery order
  const CnfRule& r = chart.grammar().rules[back.rule];
  int node;
  if (back.left < 0) {
    node = t.add_leaf(it.nt, r.kind, r.a, back.rule);
  } else {
    int l = build_tree(chart, back.left, t);
    int rgt = build_tree(chart, back.right, t);
    node = t.add_binary(it.nt, r.kind, r.j, l, rgt, back.rule);
  }
  t.nodes[node].ranges = it.rv;
  return node;
}

// A derivation choice: one backpointer per item along the way. Fragments
// own their children, so the cross product below can share nothing.
struct Frag {
  int item = -1;
  int back = 0;  // index into the item's backpointer list
  std::shared_ptr<const Frag> left, right;
};
using FragPtr = std::shared_ptr<const Frag>;

// Up to `limit` distinct derivations of item_id, in backpointer order with
// left-major cross products; `path` guards against cyclic backpointer
// chains (only the first derivation of an item is guaranteed acyclic).
inline std::vector<FragPtr> enumerate_frags(const Chart& chart, int item_id, int limit,
                                            std::set<int>& path) {
  std::vector<FragPtr> out;
  if (limit <= 0 || path.count(item_id)) return out;
  path.insert(item_id);
  const Item& it = chart.item(item_id);
  for (std::size_t bi = 0; bi < it.backs.size(); ++bi) {
    if (static_cast<int>(out.size()) >= limit) break;
    const Back& back = it.backs[bi];
    if (back.left < 0) {
      auto f = std::make_shared<Frag>();
      f->item = item_id;
      f->back = static_cast<int>(bi);
      out.push_back(std::move(f));
      continue;
    }
    auto lefts = enumerate_frags(chart, back.left, limit, path);
    for (const FragPtr& l : lefts) {
      if (static_cast<int>(out.size()) >= limit) break;
      auto rights = enumerate_frags(chart, back.right, limit - static_cast<int>(out.size()), path);
      for (const FragPtr& r : rights) {
        if (static_cast<int>(out.size()) >= limit) break;
        auto f = std::make_shared<Frag>();
        f->item = item_id;
        f->back = static_cast<int>(bi);
        f->left = l;
        f->right = r;
        out.push_back(std::move(f));
      }
    }
  }
  path.erase(item_id);
  return out;
}

inline int materialize(const Chart& chart, const Frag& f, DerivationTree& t) {
  const Item& it = chart.item(f.item);
  const Back& back = it.backs[f.back];
  const CnfRule& r = chart.grammar().rules[back.rule];
  int node;
  if (!f.left) {
    node = t.add_leaf(it.nt, r.kind, r.a, back.rule);
  } else {
    int l = materialize(chart, *f.left, t);
    int rgt = materialize(chart, *f.right, t);
    node = t.add_binary(it.nt, r.kind, r.j, l, rgt, back.rule);
  }
  t.nodes[node].ranges = it.rv;
  return node;
}

}  // namespace chart_detail

inline bool recognize(const CnfGrammar& g, const SepWord& input) {
  chart_detail::Chart chart(g, input);
  return chart.goal() >= 0;
}

inline bool recognize(const CnfGrammar& g, std::string_view input) {
  return recognize(g, SepWord::parse(input));
}

// First derivation tree in deterministic chart order, or nullopt when the
// word is not a member.
inline std::optional<DerivationTree> parse(const CnfGrammar& g, const SepWord& input) {
  chart_detail::Chart chart(g, input);
  int goal = chart.goal();
  if (goal < 0) return std::nullopt;
  DerivationTree t;
  t.root = chart_detail::build_tree(chart, goal, t);
  return t;
}

inline std::optional<DerivationTree> parse(const CnfGrammar& g, std::string_view input) {
  return parse(g, SepWord::parse(input));
}

// Up to max_trees distinct derivation trees in deterministic order (the
// first one equals the parse() result).
inline std::vector<DerivationTree> parse_all(const CnfGrammar& g, const SepWord& input,
                                             int max_trees) {
  chart_detail::Chart chart(g, input);
  std::vector<DerivationTree> out;
  int goal = chart.goal();
  if (goal < 0 || max_trees <= 0) return out;
  std::set<int> path;
  auto frags = chart_detail::enumerate_frags(chart, goal, max_trees, path);
  out.reserve(frags.size());
  for (const auto& f : frags) {
    DerivationTree t;
    t.root = chart_detail::materialize(chart, *f, t);
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<DerivationTree> parse_all(const CnfGrammar& g, std::string_view input,
                                             int max_trees) {
  return parse_all(g, SepWord::parse(input), max_trees);
}

}  // namespace dcfg
