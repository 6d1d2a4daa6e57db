#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdnr {

using NodeId = int;
using ArcId = int;

/// Per-arc real vector, indexed by arc id. Interpretation (power, weight,
/// switch state) depends on context.
using ArcVector = std::vector<double>;

/// Per-node real vector, indexed by node id.
using NodeVector = std::vector<double>;

/// Boolean arc membership, indexed by arc id.
using ArcSet = std::vector<char>;

struct Arc {
  NodeId tail = -1;
  NodeId head = -1;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotRadialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed graph with a designated root. Immutable after construction and
/// safe to share across threads. Arc ids follow insertion order; when built
/// from a network case every line contributes the two opposite arcs
/// consecutively, so `reverse_arc(e)` is `e ^ 1` there.
class Digraph {
 public:
  Digraph(int node_count, std::vector<Arc> arcs, NodeId root);

  int node_count() const { return node_count_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  NodeId root() const { return root_; }
  const Arc& arc(ArcId e) const { return arcs_[static_cast<size_t>(e)]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  /// Arc id of (head, tail) if present, -1 otherwise.
  ArcId reverse_arc(ArcId e) const { return reverse_[static_cast<size_t>(e)]; }

  /// Arc ids entering node v, ascending.
  const std::vector<ArcId>& in_arcs(NodeId v) const;
  /// Arc ids leaving node v, ascending.
  const std::vector<ArcId>& out_arcs(NodeId v) const;

  /// All j with (i,j) or (j,i) in the arc set, ascending, no duplicates.
  std::vector<NodeId> neighbors(NodeId i) const;

  bool has_node(NodeId v) const { return v >= 0 && v < node_count_; }

 private:
  int node_count_;
  std::vector<Arc> arcs_;
  NodeId root_;
  std::vector<ArcId> reverse_;
  std::vector<std::vector<ArcId>> in_arcs_;
  std::vector<std::vector<ArcId>> out_arcs_;
};

/// True iff `s` selects exactly node_count-1 arcs forming a spanning
/// arborescence rooted at g.root(): root in-degree 0, every other node
/// in-degree 1 and reachable from the root through selected arcs.
bool is_spanning_arborescence(const Digraph& g, const ArcSet& s);

/// Minimum weight spanning arborescence rooted at g.root(), avoiding arcs
/// with forbidden[e] true. Exact for arbitrary (including negative) weights.
/// Ties are broken by preferring lower arc ids at every selection step, so
/// results are reproducible across platforms.
/// Throws InfeasibleError when no spanning arborescence exists.
ArcSet min_weight_rooted_arborescence(const Digraph& g, const ArcVector& h,
                                      const ArcSet& forbidden);
ArcSet min_weight_rooted_arborescence(const Digraph& g, const ArcVector& h);

/// Exhaustive enumeration of all spanning arborescences rooted at g.root()
/// avoiding forbidden arcs. Test oracle; guarded to node_count <= 10.
std::vector<ArcSet> enumerate_arborescences(const Digraph& g,
                                            const ArcSet& forbidden);
std::vector<ArcSet> enumerate_arborescences(const Digraph& g);

inline double arc_set_weight(const ArcSet& s, const ArcVector& h) {
  double w = 0.0;
  for (size_t e = 0; e < s.size(); ++e)
    if (s[e]) w += h[e];
  return w;
}

}  // namespace pdnr
