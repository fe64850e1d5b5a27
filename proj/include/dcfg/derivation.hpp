#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcfg/cnf.hpp"
#include "dcfg/error.hpp"
#include "dcfg/sepword.hpp"

namespace dcfg {

// Input-position segments of a constituent: a rank-l node occupies l+1
// non-overlapping ordered segments; the l gaps between them are where its
// separators sit.
struct RangeVector {
  std::vector<std::pair<int, int>> ranges;

  bool operator==(const RangeVector& o) const = default;
  auto operator<=>(const RangeVector& o) const = default;

  int first_start() const { return ranges.front().first; }
  int last_end() const { return ranges.back().second; }
};

// Derivation tree of a CNF grammar. Nodes are stored in one vector; every
// internal node's yield is the connective applied to the child yields.
// `ranges` is present on parser-produced nodes; `origin` maps a node of a
// collapsed tree back to the tree it was built from.
struct DerivationTree {
  struct Node {
    int label = -1;  // nonterminal id
    int rule = -1;   // index into CnfGrammar::rules, -1 for hand-built nodes
    CnfRule::Kind kind = CnfRule::Term;
    int j = 0;       // Inter gap
    Symbol sym = 0;  // Term leaf symbol
    int left = -1, right = -1;
    int parent = -1;
    int rank = 0;
    SepWord yield;
    std::optional<RangeVector> ranges;
    int origin = -1;
  };

  std::vector<Node> nodes;
  int root = -1;

  const SepWord& word() const { return nodes[root].yield; }

  bool has(int v) const { return v >= 0 && v < static_cast<int>(nodes.size()); }

  void check(int v) const {
    if (!has(v)) throw Error(Errc::NodeNotInTree, "node " + std::to_string(v));
  }

  int add_leaf(int label, CnfRule::Kind kind, Symbol sym, int rule = -1) {
    Node n;
    n.label = label;
    n.rule = rule;
    n.kind = kind;
    if (kind == CnfRule::Term) {
      n.sym = sym;
      n.yield = SepWord({sym});
      n.rank = (sym == kSep) ? 1 : 0;
    }
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  int add_binary(int label, CnfRule::Kind kind, int j, int left, int right, int rule = -1) {
    Node n;
    n.label = label;
    n.rule = rule;
    n.kind = kind;
    n.j = j;
    n.left = left;
    n.right = right;
    if (kind == CnfRule::Inter)
      n.yield = word_intercalate(nodes[left].yield, j, nodes[right].yield);
    else
      n.yield = nodes[left].yield + nodes[right].yield;
    n.rank = n.yield.rank();
    int id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    nodes[left].parent = id;
    nodes[right].parent = id;
    return id;
  }

  bool is_internal(int v) const { return nodes[v].left >= 0; }

  bool is_ancestor(int anc, int v) const {
    for (int x = v; x >= 0; x = nodes[x].parent)
      if (x == anc) return true;
    return false;
  }

  // Node ids of the whole tree in preorder (left before right).
  std::vector<int> preorder() const {
    std::vector<int> out, stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.push_back(v);
      if (nodes[v].right >= 0) stack.push_back(nodes[v].right);
      if (nodes[v].left >= 0) stack.push_back(nodes[v].left);
    }
    return out;
  }
};

}  // namespace dcfg
