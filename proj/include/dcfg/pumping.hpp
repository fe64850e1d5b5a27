#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "dcfg/derivation.hpp"
#include "dcfg/error.hpp"
#include "dcfg/parser.hpp"

namespace dcfg {

// An l-pump: two internal nodes with the same label of rank l-1, the bottom
// one a direct descendant of the top.
struct Pump {
  int v = -1;   // top
  int vp = -1;  // bottom
  int label = -1;
  int l = 0;
};

// w = s_0 y_1 u_1 z_1 s_1 ... y_l u_l z_l s_l; pumping raises y_i, z_i to a
// common power.
struct PumpDecomposition {
  int l = 0;
  std::vector<SepWord> s;  // l+1 entries
  std::vector<SepWord> y, u, z;  // l entries each
  std::optional<int> selected_hit;  // Ogden: a covered selected position
};

inline bool is_direct_descendant(const DerivationTree& t, int v, int vp) {
  t.check(v);
  t.check(vp);
  int rank = t.nodes[v].rank;
  for (int x = vp; x >= 0; x = t.nodes[x].parent) {
    if (t.nodes[x].rank != rank) return false;
    if (x == v) return true;
  }
  return false;
}

// All pumps, top nodes in preorder, bottoms in preorder below each top.
inline std::vector<Pump> find_pumps(const DerivationTree& t) {
  std::vector<Pump> out;
  auto order = t.preorder();
  for (int v : order) {
    if (!t.is_internal(v)) continue;
    for (int vp : order) {
      if (vp == v || !t.is_internal(vp)) continue;
      if (t.nodes[vp].label != t.nodes[v].label) continue;
      if (!t.is_ancestor(v, vp)) continue;
      if (!is_direct_descendant(t, v, vp)) continue;
      out.push_back({v, vp, t.nodes[v].label, t.nodes[v].rank + 1});
    }
  }
  return out;
}

// Word-level factorization of the context between `stop` and `v`: for every
// ground gamma of rank(v), eval of the context applied to gamma equals
// s1 (gamma wrapped with the fillers) s2. Computed by peeling one connective
// per step on the path from v up to stop.
struct ContextFactorization {
  SepWord s1, s2;
  std::vector<SepWord> fillers;  // one per gap of the hole

  // The direct-descendant case: outer words separator-free and each filler
  // of the shape y 1 z.
  bool gap_preserving() const {
    if (s1.rank() != 0 || s2.rank() != 0) return false;
    for (const auto& f : fillers)
      if (f.rank() != 1) return false;
    return true;
  }

  SepWord reconstruct(const SepWord& gamma) const {
    return s1 + word_wrap(gamma, fillers) + s2;
  }
};

namespace pump_detail {

// Split w at its j-th separator into the part before and the part after.
inline std::pair<SepWord, SepWord> split_at(const SepWord& w, int j) {
  std::vector<Symbol> before, after;
  int seen = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == kSep && ++seen == j) continue;
    (seen >= j ? after : before).push_back(w[i]);
  }
  return {SepWord(std::move(before)), SepWord(std::move(after))};
}

}  // namespace pump_detail

inline ContextFactorization factorize_context(const DerivationTree& t, int v, int stop) {
  t.check(v);
  t.check(stop);
  ContextFactorization f;
  f.fillers.assign(t.nodes[v].rank, sep_word());
  int cur = v;
  while (cur != stop) {
    int p = t.nodes[cur].parent;
    if (p < 0) throw Error(Errc::NodeNotInTree, "node is not below the factorization root");
    const auto& pn = t.nodes[p];
    bool cur_is_left = (pn.left == cur);
    const SepWord& sib = t.nodes[cur_is_left ? pn.right : pn.left].yield;
    if (pn.kind == CnfRule::Concat) {
      if (cur_is_left)
        f.s2 = f.s2 + sib;
      else
        f.s1 = sib + f.s1;
    } else {  // Inter at gap pn.j
      if (cur_is_left) {
        // the j-th separator of s1 (hole fillers) s2 receives the sibling
        int j = pn.j;
        if (j <= f.s1.rank()) {
          f.s1 = word_intercalate(f.s1, j, sib);
        } else {
          j -= f.s1.rank();
          bool placed = false;
          for (auto& filler : f.fillers) {
            if (j <= filler.rank()) {
              filler = word_intercalate(filler, j, sib);
              placed = true;
              break;
            }
            j -= filler.rank();
          }
          if (!placed) f.s2 = word_intercalate(f.s2, j, sib);
        }
      } else {
        auto [before, after] = pump_detail::split_at(sib, pn.j);
        f.s1 = before + f.s1;
        f.s2 = f.s2 + after;
      }
    }
    cur = p;
  }
  return f;
}

inline ContextFactorization factorize_context(const DerivationTree& t, int v) {
  return factorize_context(t, v, t.root);
}

namespace pump_detail {

inline void check_pump(const DerivationTree& t, const Pump& p) {
  t.check(p.v);
  t.check(p.vp);
  if (p.v == p.vp) throw Error(Errc::InvalidPump, "top and bottom coincide");
  if (!t.is_internal(p.v) || !t.is_internal(p.vp))
    throw Error(Errc::InvalidPump, "pump nodes must be internal");
  if (t.nodes[p.v].label != t.nodes[p.vp].label)
    throw Error(Errc::InvalidPump, "pump nodes carry different labels");
  if (!t.is_ancestor(p.v, p.vp) || !is_direct_descendant(t, p.v, p.vp))
    throw Error(Errc::InvalidPump, "bottom is not a direct descendant of top");
}

}  // namespace pump_detail

inline PumpDecomposition pump_decompose(const DerivationTree& t, const Pump& p) {
  pump_detail::check_pump(t, p);
  PumpDecomposition d;
  d.l = t.nodes[p.v].rank + 1;
  d.u = t.nodes[p.vp].yield.split_at_separators();
  ContextFactorization inner = factorize_context(t, p.vp, p.v);
  if (!inner.gap_preserving())
    throw Error(Errc::InvalidPump, "inner context is not gap-preserving");
  d.y.push_back(inner.s1);
  for (const auto& filler : inner.fillers) {
    auto [z, y_next] = pump_detail::split_at(filler, 1);
    d.z.push_back(z);
    d.y.push_back(y_next);
  }
  d.z.push_back(inner.s2);
  ContextFactorization outer = factorize_context(t, p.v, t.root);
  d.s.push_back(outer.s1);
  for (const auto& filler : outer.fillers) d.s.push_back(filler);
  d.s.push_back(outer.s2);
  return d;
}

inline SepWord pump_word(const PumpDecomposition& d, int p) {
  SepWord w = d.s[0];
  for (int i = 0; i < d.l; ++i) {
    for (int q = 0; q < p; ++q) w = w + d.y[i];
    w = w + d.u[i];
    for (int q = 0; q < p; ++q) w = w + d.z[i];
    w = w + d.s[i + 1];
  }
  return w;
}

// Replace the subtree at p.v by the subtree at p.vp. Range annotations on
// strict ancestors of the splice point become stale and are dropped; every
// node records the node it came from.
inline DerivationTree collapse(const DerivationTree& t, const Pump& p) {
  pump_detail::check_pump(t, p);
  std::set<int> ancestors;  // strict ancestors of p.v
  for (int x = t.nodes[p.v].parent; x >= 0; x = t.nodes[x].parent) ancestors.insert(x);
  DerivationTree out;
  auto cp = [&](auto&& self, int old) -> int {
    int src = (old == p.v) ? p.vp : old;
    const auto& n = t.nodes[src];
    int id;
    if (n.left < 0) {
      id = out.add_leaf(n.label, n.kind, n.sym, n.rule);
    } else {
      int l = self(self, n.left);
      int r = self(self, n.right);
      id = out.add_binary(n.label, n.kind, n.j, l, r, n.rule);
    }
    out.nodes[id].origin = src;
    if (!ancestors.count(src)) out.nodes[id].ranges = n.ranges;
    return id;
  };
  out.root = cp(cp, t.root);
  return out;
}

namespace pump_detail {

inline int pumped_length(const PumpDecomposition& d) {
  int total = 0;
  for (int i = 0; i < d.l; ++i)
    total += static_cast<int>(d.y[i].size() + d.u[i].size() + d.z[i].size());
  return total;
}

inline int yz_length(const PumpDecomposition& d) {
  int total = 0;
  for (int i = 0; i < d.l; ++i) total += static_cast<int>(d.y[i].size() + d.z[i].size());
  return total;
}

// Half-open position ranges of the y and z segments within pump_word(d, 1).
inline std::vector<std::pair<int, int>> yz_ranges(const PumpDecomposition& d) {
  std::vector<std::pair<int, int>> out;
  int pos = static_cast<int>(d.s[0].size());
  for (int i = 0; i < d.l; ++i) {
    out.emplace_back(pos, pos + static_cast<int>(d.y[i].size()));
    pos += static_cast<int>(d.y[i].size() + d.u[i].size());
    out.emplace_back(pos, pos + static_cast<int>(d.z[i].size()));
    pos += static_cast<int>(d.z[i].size() + d.s[i + 1].size());
  }
  return out;
}

}  // namespace pump_detail

// Best qualifying pump (|y z| > 0) over the first parse tree that has one:
// minimal pumped-region length, ties by leftmost top then bottom node in
// preorder.
inline std::optional<PumpDecomposition> pumping_certificate(const CnfGrammar& g, const SepWord& w,
                                                            int max_trees = 32) {
  auto trees = parse_all(g, w, max_trees);
  if (trees.empty()) throw Error(Errc::NotMember, "word is not in the language");
  for (const auto& t : trees) {
    auto order = t.preorder();
    std::vector<int> pre_index(t.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) pre_index[order[i]] = static_cast<int>(i);
    std::optional<PumpDecomposition> best;
    std::tuple<int, int, int> best_key;
    for (const Pump& p : find_pumps(t)) {
      PumpDecomposition d = pump_decompose(t, p);
      if (pump_detail::yz_length(d) == 0) continue;
      std::tuple<int, int, int> key{pump_detail::pumped_length(d), pre_index[p.v],
                                    pre_index[p.vp]};
      if (!best || key < best_key) {
        best = std::move(d);
        best_key = key;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

// Ogden search: look for a pump whose pumped region covers a selected
// position of the original word; otherwise collapse the leftmost pump and
// continue on the shrunken tree, tracking positions and node origins so the
// winning pump can be pulled back to the original tree. Some positions are
// never in any pump's scope in any tree (e.g. the junction letters of a
// square word); for those the search falls back to letter identity, which
// is what collapsing preserves: a certificate whose pumped region contains
// the selected position's letter.
inline std::optional<PumpDecomposition> ogden_certificate(const CnfGrammar& g, const SepWord& w,
                                                          const std::set<int>& selected,
                                                          int max_trees = 32) {
  for (int pos : selected)
    if (pos < 0 || pos >= static_cast<int>(w.size()))
      throw Error(Errc::PositionOutOfRange, "selected position " + std::to_string(pos));
  if (selected.empty()) return pumping_certificate(g, w, max_trees);
  auto trees = parse_all(g, w, max_trees);
  if (trees.empty()) throw Error(Errc::NotMember, "word is not in the language");

  auto covered = [&](const PumpDecomposition& d, const std::vector<int>& posmap)
      -> std::optional<int> {
    for (auto [lo, hi] : pump_detail::yz_ranges(d))
      for (int i = lo; i < hi; ++i)
        if (selected.count(posmap[i])) return posmap[i];
    return std::nullopt;
  };

  for (const auto& original : trees) {
    DerivationTree cur = original;
    std::vector<int> posmap(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) posmap[i] = static_cast<int>(i);
    std::vector<int> omap(cur.nodes.size());  // current node -> original node
    for (std::size_t i = 0; i < omap.size(); ++i) omap[i] = static_cast<int>(i);

    for (int guard = 0; guard < 100000; ++guard) {
      auto pumps = find_pumps(cur);
      if (pumps.empty()) break;
      for (const Pump& p : pumps) {
        PumpDecomposition d = pump_decompose(cur, p);
        auto hit = covered(d, posmap);
        if (!hit) continue;
        Pump back{omap[p.v], omap[p.vp], original.nodes[omap[p.v]].label,
                  original.nodes[omap[p.v]].rank + 1};
        PumpDecomposition d0 = pump_decompose(original, back);
        std::vector<int> identity(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) identity[i] = static_cast<int>(i);
        auto hit0 = covered(d0, identity);
        if (!hit0) continue;  // defensive: pull-back lost coverage
        d0.selected_hit = hit0;
        return d0;
      }
      // No covering pump: collapse the leftmost one and retry.
      const Pump& p = pumps.front();
      PumpDecomposition d = pump_decompose(cur, p);
      auto ranges = pump_detail::yz_ranges(d);
      std::vector<int> new_posmap;
      std::size_t r = 0;
      for (std::size_t i = 0; i < posmap.size(); ++i) {
        while (r < ranges.size() && static_cast<int>(i) >= ranges[r].second) ++r;
        bool dropped = r < ranges.size() && static_cast<int>(i) >= ranges[r].first &&
                       static_cast<int>(i) < ranges[r].second;
        if (!dropped) new_posmap.push_back(posmap[i]);
      }
      DerivationTree next = collapse(cur, p);
      std::vector<int> next_omap(next.nodes.size());
      for (std::size_t i = 0; i < next.nodes.size(); ++i)
        next_omap[i] = omap[next.nodes[i].origin];
      cur = std::move(next);
      omap = std::move(next_omap);
      posmap = std::move(new_posmap);
    }
  }
  // Letter-identity fallback.
  auto cert = pumping_certificate(g, w, max_trees);
  if (!cert) return std::nullopt;
  auto ranges = pump_detail::yz_ranges(*cert);
  for (int pos : selected) {
    for (auto [lo, hi] : ranges) {
      for (int i = lo; i < hi; ++i) {
        if (w[i] == w[pos]) {
          cert->selected_hit = pos;
          return cert;
        }
      }
    }
  }
  return std::nullopt;
}

inline nlohmann::json certificate_json(const PumpDecomposition& d) {
  auto plain = [](const SepWord& w) { return w.empty() ? std::string() : w.render(); };
  nlohmann::json j;
  j["l"] = d.l;
  j["s"] = nlohmann::json::array();
  j["y"] = nlohmann::json::array();
  j["u"] = nlohmann::json::array();
  j["z"] = nlohmann::json::array();
  for (const auto& w : d.s) j["s"].push_back(plain(w));
  for (const auto& w : d.y) j["y"].push_back(plain(w));
  for (const auto& w : d.u) j["u"].push_back(plain(w));
  for (const auto& w : d.z) j["z"].push_back(plain(w));
  j["selected_hit"] = d.selected_hit ? nlohmann::json(*d.selected_hit) : nlohmann::json(nullptr);
  return j;
}

}  // namespace dcfg
