#pragma once

#include <array>
#include <vector>

#include <json.hpp>

#include "dcfg/derivation.hpp"
#include "dcfg/error.hpp"
#include "dcfg/pumping.hpp"

namespace dcfg {

// A rank-1 constituent occupies two input segments [i1;j1], [i2;j2].
struct Constituent1 {
  int i1 = 0, j1 = 0, i2 = 0, j2 = 0;
  bool operator==(const Constituent1&) const = default;
};

// A 2-pump: top constituent (i1, l1, i2, l2), bottom (j1, k1, j2, k2); the
// eight indices are nondecreasing. Its four segments are [i1;j1], [k1;l1],
// [i2;j2], [k2;l2].
struct Pump2 {
  int i1 = 0, j1 = 0, k1 = 0, l1 = 0, i2 = 0, j2 = 0, k2 = 0, l2 = 0;
  bool operator==(const Pump2&) const = default;

  std::array<int, 8> tuple() const { return {i1, j1, k1, l1, i2, j2, k2, l2}; }
};

struct Classification {
  int case_id = 0;  // 0 = Unclassifiable
  bool swapped = false;
};

namespace geo_detail {

inline const RangeVector& ranges_of(const DerivationTree& t, int v) {
  if (!t.nodes[v].ranges)
    throw Error(Errc::MissingRanges, "node " + std::to_string(v) + " carries no ranges");
  return *t.nodes[v].ranges;
}

}  // namespace geo_detail

inline std::vector<std::pair<int, Constituent1>> constituents_rank1(const DerivationTree& t) {
  std::vector<std::pair<int, Constituent1>> out;
  for (int v : t.preorder()) {
    if (t.nodes[v].rank != 1) continue;
    const RangeVector& rv = geo_detail::ranges_of(t, v);
    out.emplace_back(v, Constituent1{rv.ranges[0].first, rv.ranges[0].second,
                                     rv.ranges[1].first, rv.ranges[1].second});
  }
  return out;
}

inline std::vector<Pump2> pumps_rank1(const DerivationTree& t) {
  std::vector<Pump2> out;
  for (const Pump& p : find_pumps(t)) {
    if (t.nodes[p.v].rank != 1) continue;
    const RangeVector& top = geo_detail::ranges_of(t, p.v);
    const RangeVector& bot = geo_detail::ranges_of(t, p.vp);
    out.push_back({top.ranges[0].first, bot.ranges[0].first, bot.ranges[0].second,
                   top.ranges[0].second, top.ranges[1].first, bot.ranges[1].first,
                   bot.ranges[1].second, top.ranges[1].second});
  }
  return out;
}

// Lemma on mutual positions of rank-1 constituents: the four alternatives,
// tried in order, in both argument orders.
inline Classification classify_constituents(const Constituent1& c, const Constituent1& cp) {
  auto matches = [](int case_id, const Constituent1& a, const Constituent1& b) {
    switch (case_id) {
      case 1: return a.j2 <= b.i1;
      case 2: return a.j1 <= b.i1 && b.i1 <= b.j2 && b.j2 <= a.i2;
      case 3:
        return (a.i1 <= b.i1 && b.i1 <= b.j2 && b.j2 <= a.j1) ||
               (a.i2 <= b.i1 && b.i1 <= b.j2 && b.j2 <= a.j2);
      case 4:
        return a.i1 <= b.i1 && b.i1 <= b.j1 && b.j1 <= a.j1 && a.j1 <= a.i2 && a.i2 <= b.i2 &&
               b.i2 <= b.j2 && b.j2 <= a.j2;
      default: return false;
    }
  };
  for (int id = 1; id <= 4; ++id) {
    if (matches(id, c, cp)) return {id, false};
    if (matches(id, cp, c)) return {id, true};
  }
  return {};
}

// The twelve mutual-position alternatives for pairs of 2-pumps, in the
// lemma's listed order, in both argument orders.
inline Classification classify_pumps(const Pump2& p, const Pump2& q) {
  auto chain = [](std::initializer_list<int> xs) {
    int prev = *xs.begin();
    for (int x : xs) {
      if (x < prev) return false;
      prev = x;
    }
    return true;
  };
  auto matches = [&](int case_id, const Pump2& a, const Pump2& b) {
    switch (case_id) {
      case 1: return a.l2 <= b.i1;
      case 2:
        return chain({a.i1, b.i1, b.l2, a.j1}) || chain({a.k2, b.i1, b.l2, a.l2});
      case 3:
        return chain({a.i1, b.i1, b.j1, a.j1, a.k1, b.k1, b.l1, a.l1, a.i2, b.i2, b.j2, a.j2,
                      a.k2, b.k2, b.l2, a.l2});
      case 4:
        return chain({a.i1, b.i1, b.j1, b.k1, a.j1, a.k1, b.l1, a.l1, a.i2, b.i2, a.j2, a.k2,
                      b.j2, b.k2, b.l2, a.l2});
      case 5:
        return chain({a.i1, b.i1, a.j1, a.k1, b.j1, b.k1, b.l1, a.l1, a.i2, b.i2, b.j2, b.k2,
                      a.j2, a.k2, b.l2, a.l2});
      case 6:
        return chain({a.i1, b.i1, a.j1, b.j1, b.k1, a.k1, b.l1, a.l1, a.i2, b.i2, a.j2, b.j2,
                      b.k2, a.k2, b.l2, a.l2});
      case 7: return chain({a.k1, b.i1, b.l1, a.l1, a.i2, b.i2, b.l2, a.j2});
      case 8: return chain({a.i1, b.i1, b.l1, a.j1, a.k2, b.i2, b.l2, a.l2});
      case 9:
        return chain({a.k1, b.i1, b.l2, a.l1}) || chain({a.i2, b.i1, b.l2, a.j2});
      case 10: return chain({a.j1, b.i1, b.l1, a.k1, a.j2, b.i2, b.l2, a.k2});
      case 11:
        return chain({a.j1, b.i1, b.l2, a.k1}) || chain({a.j2, b.i1, b.l2, a.k2});
      case 12: return chain({a.l1, b.i2, b.l2, a.i2});
      default: return false;
    }
  };
  for (int id = 1; id <= 12; ++id) {
    if (matches(id, p, q)) return {id, false};
    if (matches(id, q, p)) return {id, true};
  }
  return {};
}

inline bool is_linear(const Pump2& p, const Pump2& q) { return p.l2 <= q.i1 || q.l2 <= p.i1; }

// p is outer for q.
inline bool is_outer(const Pump2& p, const Pump2& q) {
  return p.i1 <= q.i1 && q.i1 <= q.l2 && q.l2 <= p.l2;
}

// p is embracing for q.
inline bool is_embracing(const Pump2& p, const Pump2& q) {
  return p.l1 <= q.i1 && q.i1 <= q.l2 && q.l2 <= p.i2;
}

enum class Corollary { NotApplicable, SecondOuter, FirstEmbracing, ViolationReport };

// When a segment of q is a proper subset of p's middle gap [l1; i2], either
// q is outer for p or p is embracing for q.
inline Corollary corollary_check(const Pump2& p, const Pump2& q) {
  auto proper_subset = [&](int lo, int hi) {
    return p.l1 <= lo && hi <= p.i2 && (p.l1 < lo || hi < p.i2);
  };
  bool applicable = proper_subset(q.i1, q.j1) || proper_subset(q.k1, q.l1) ||
                    proper_subset(q.i2, q.j2) || proper_subset(q.k2, q.l2);
  if (!applicable) return Corollary::NotApplicable;
  if (is_outer(q, p)) return Corollary::SecondOuter;
  if (is_embracing(p, q)) return Corollary::FirstEmbracing;
  return Corollary::ViolationReport;
}

inline nlohmann::json classification_json(const std::array<int, 8>& a, const std::array<int, 8>& b,
                                          const Classification& c) {
  nlohmann::json j;
  j["pair"] = {a, b};
  j["case"] = c.case_id;
  j["swapped"] = c.swapped;
  return j;
}

inline nlohmann::json classification_json(const Constituent1& a, const Constituent1& b,
                                          const Classification& c) {
  nlohmann::json j;
  j["pair"] = {{a.i1, a.j1, a.i2, a.j2}, {b.i1, b.j1, b.i2, b.j2}};
  j["case"] = c.case_id;
  j["swapped"] = c.swapped;
  return j;
}

}  // namespace dcfg
