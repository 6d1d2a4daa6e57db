#include "pdnr/graph.hpp"

#include <algorithm>
#include <queue>

namespace pdnr {

Digraph::Digraph(int node_count, std::vector<Arc> arcs, NodeId root)
    : node_count_(node_count), arcs_(std::move(arcs)), root_(root) {
  if (node_count_ <= 0) throw std::invalid_argument("node_count must be positive");
  if (root_ < 0 || root_ >= node_count_) throw std::invalid_argument("root out of range");
  in_arcs_.resize(static_cast<size_t>(node_count_));
  out_arcs_.resize(static_cast<size_t>(node_count_));
  for (size_t e = 0; e < arcs_.size(); ++e) {
    const Arc& a = arcs_[e];
    if (!has_node(a.tail) || !has_node(a.head))
      throw std::invalid_argument("arc endpoint out of range");
    if (a.tail == a.head) throw std::invalid_argument("self loops not allowed");
    out_arcs_[static_cast<size_t>(a.tail)].push_back(static_cast<ArcId>(e));
    in_arcs_[static_cast<size_t>(a.head)].push_back(static_cast<ArcId>(e));
  }
  reverse_.assign(arcs_.size(), -1);
  for (size_t e = 0; e < arcs_.size(); ++e) {
    for (ArcId f : out_arcs_[static_cast<size_t>(arcs_[e].head)]) {
      if (arcs_[static_cast<size_t>(f)].head == arcs_[e].tail) {
        if (static_cast<ArcId>(e) == f) continue;
        if (reverse_[e] != -1)
          throw std::invalid_argument("duplicate arc in arc list");
        reverse_[e] = f;
      }
    }
    // duplicate forward arcs would collide in the reverse index of their
    // shared reverse; catch them directly as well
  }
  for (size_t v = 0; v < out_arcs_.size(); ++v) {
    auto& outs = out_arcs_[v];
    for (size_t a = 1; a < outs.size(); ++a)
      for (size_t b = 0; b < a; ++b)
        if (arcs_[static_cast<size_t>(outs[a])].head == arcs_[static_cast<size_t>(outs[b])].head)
          throw std::invalid_argument("duplicate arc in arc list");
  }
}

const std::vector<ArcId>& Digraph::in_arcs(NodeId v) const {
  if (!has_node(v)) throw std::out_of_range("node id out of range");
  return in_arcs_[static_cast<size_t>(v)];
}

const std::vector<ArcId>& Digraph::out_arcs(NodeId v) const {
  if (!has_node(v)) throw std::out_of_range("node id out of range");
  return out_arcs_[static_cast<size_t>(v)];
}

std::vector<NodeId> Digraph::neighbors(NodeId i) const {
  if (!has_node(i)) throw std::out_of_range("node id out of range");
  std::vector<NodeId> result;
  for (ArcId e : out_arcs_[static_cast<size_t>(i)]) result.push_back(arcs_[static_cast<size_t>(e)].head);
  for (ArcId e : in_arcs_[static_cast<size_t>(i)]) result.push_back(arcs_[static_cast<size_t>(e)].tail);
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

bool is_spanning_arborescence(const Digraph& g, const ArcSet& s) {
  if (s.size() != static_cast<size_t>(g.arc_count())) return false;
  const int n = g.node_count();
  int selected = 0;
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (size_t e = 0; e < s.size(); ++e) {
    if (!s[e]) continue;
    ++selected;
    ++indeg[static_cast<size_t>(g.arc(static_cast<ArcId>(e)).head)];
  }
  if (selected != n - 1) return false;
  if (indeg[static_cast<size_t>(g.root())] != 0) return false;
  for (NodeId v = 0; v < n; ++v)
    if (v != g.root() && indeg[static_cast<size_t>(v)] != 1) return false;
  // reachability from the root through selected arcs
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::queue<NodeId> q;
  q.push(g.root());
  seen[static_cast<size_t>(g.root())] = 1;
  int reached = 1;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (ArcId e : g.out_arcs(v)) {
      if (!s[static_cast<size_t>(e)]) continue;
      NodeId h = g.arc(e).head;
      if (!seen[static_cast<size_t>(h)]) {
        seen[static_cast<size_t>(h)] = 1;
        ++reached;
        q.push(h);
      }
    }
  }
  return reached == n;
}

namespace {

struct LevelArc {
  int tail;      // component id at this level
  int head;      // component id at this level
  double w;      // reduced weight
  ArcId orig;    // original arc id
};

struct Level {
  std::vector<LevelArc> arcs;
  // chosen entering arc per component id (-1 for root / unset)
  std::vector<ArcId> chosen_orig;
  std::vector<double> chosen_w;
  std::vector<int> chosen_tail;
  std::vector<int> cycle;  // component ids contracted into the next level's supernode
  int root = -1;
  int comp_count = 0;
};

}  // namespace

ArcSet min_weight_rooted_arborescence(const Digraph& g, const ArcVector& h,
                                      const ArcSet& forbidden) {
  if (h.size() != static_cast<size_t>(g.arc_count()))
    throw std::invalid_argument("weight vector length mismatch");
  if (!forbidden.empty() && forbidden.size() != static_cast<size_t>(g.arc_count()))
    throw std::invalid_argument("forbidden set length mismatch");

  const int n = g.node_count();
  ArcSet result(static_cast<size_t>(g.arc_count()), 0);
  if (n == 1) return result;

  std::vector<Level> stack;
  Level base;
  base.root = g.root();
  base.comp_count = n;
  for (ArcId e = 0; e < g.arc_count(); ++e) {
    if (!forbidden.empty() && forbidden[static_cast<size_t>(e)]) continue;
    if (g.arc(e).head == g.root()) continue;  // arcs into the root never help
    base.arcs.push_back({g.arc(e).tail, g.arc(e).head, h[static_cast<size_t>(e)], e});
  }
  stack.push_back(std::move(base));

  // contract until the greedy in-arc choice is acyclic
  while (true) {
    Level& lv = stack.back();
    const int m = lv.comp_count;
    lv.chosen_orig.assign(static_cast<size_t>(m), -1);
    lv.chosen_w.assign(static_cast<size_t>(m), 0.0);
    lv.chosen_tail.assign(static_cast<size_t>(m), -1);
    for (const LevelArc& a : lv.arcs) {
      if (a.tail == a.head) continue;
      const size_t hd = static_cast<size_t>(a.head);
      // strict improvement, or equal weight with lower original arc id
      if (lv.chosen_orig[hd] == -1 || a.w < lv.chosen_w[hd] ||
          (a.w == lv.chosen_w[hd] && a.orig < lv.chosen_orig[hd])) {
        lv.chosen_orig[hd] = a.orig;
        lv.chosen_w[hd] = a.w;
        lv.chosen_tail[hd] = a.tail;
      }
    }
    for (int c = 0; c < m; ++c)
      if (c != lv.root && lv.chosen_orig[static_cast<size_t>(c)] == -1)
        throw InfeasibleError("no spanning arborescence exists");

    // look for a cycle in the chosen-parent functional graph
    std::vector<int> state(static_cast<size_t>(m), 0);  // 0 unseen, 1 on path, 2 done
    state[static_cast<size_t>(lv.root)] = 2;
    std::vector<int> cycle;
    for (int start = 0; start < m && cycle.empty(); ++start) {
      int v = start;
      std::vector<int> path;
      while (state[static_cast<size_t>(v)] == 0) {
        state[static_cast<size_t>(v)] = 1;
        path.push_back(v);
        v = lv.chosen_tail[static_cast<size_t>(v)];
      }
      if (state[static_cast<size_t>(v)] == 1) {
        auto it = std::find(path.begin(), path.end(), v);
        cycle.assign(it, path.end());
      }
      for (int u : path) state[static_cast<size_t>(u)] = 2;
    }
    if (cycle.empty()) break;

    lv.cycle = cycle;
    std::vector<char> in_cycle(static_cast<size_t>(m), 0);
    for (int c : cycle) in_cycle[static_cast<size_t>(c)] = 1;

    // relabel: surviving components keep ascending order, supernode goes last
    std::vector<int> relabel(static_cast<size_t>(m), -1);
    int next = 0;
    for (int c = 0; c < m; ++c)
      if (!in_cycle[static_cast<size_t>(c)]) relabel[static_cast<size_t>(c)] = next++;
    const int super = next;

    Level nl;
    nl.comp_count = next + 1;
    nl.root = relabel[static_cast<size_t>(lv.root)];
    for (const LevelArc& a : lv.arcs) {
      const bool t_in = in_cycle[static_cast<size_t>(a.tail)];
      const bool h_in = in_cycle[static_cast<size_t>(a.head)];
      if (t_in && h_in) continue;
      LevelArc na;
      na.tail = t_in ? super : relabel[static_cast<size_t>(a.tail)];
      na.head = h_in ? super : relabel[static_cast<size_t>(a.head)];
      na.w = h_in ? a.w - lv.chosen_w[static_cast<size_t>(a.head)] : a.w;
      na.orig = a.orig;
      nl.arcs.push_back(na);
    }
    stack.push_back(std::move(nl));
  }

  // unwind: start from the acyclic top level's choices, expand cycles
  std::vector<ArcId> picked;
  {
    const Level& top = stack.back();
    for (int c = 0; c < top.comp_count; ++c)
      if (c != top.root) picked.push_back(top.chosen_orig[static_cast<size_t>(c)]);
  }
  for (size_t li = stack.size() - 1; li-- > 0;) {
    const Level& lv = stack[li];
    const int m = lv.comp_count;
    std::vector<char> in_cycle(static_cast<size_t>(m), 0);
    for (int c : lv.cycle) in_cycle[static_cast<size_t>(c)] = 1;
    // head component of each picked arc at this level
    std::vector<int> head_comp(static_cast<size_t>(g.arc_count()), -1);
    for (const LevelArc& a : lv.arcs) head_comp[static_cast<size_t>(a.orig)] = a.head;
    int entered = -1;  // cycle component the arborescence enters through
    for (ArcId e : picked) {
      const int hc = head_comp[static_cast<size_t>(e)];
      if (hc >= 0 && in_cycle[static_cast<size_t>(hc)]) {
        entered = hc;
        break;
      }
    }
    for (int c : lv.cycle)
      if (c != entered) picked.push_back(lv.chosen_orig[static_cast<size_t>(c)]);
  }

  for (ArcId e : picked) result[static_cast<size_t>(e)] = 1;
  return result;
}

ArcSet min_weight_rooted_arborescence(const Digraph& g, const ArcVector& h) {
  return min_weight_rooted_arborescence(g, h, ArcSet{});
}

namespace {

void enumerate_rec(const Digraph& g, const ArcSet& forbidden,
                   std::vector<NodeId>& nodes, size_t idx,
                   std::vector<ArcId>& parent_arc, std::vector<NodeId>& parent,
                   std::vector<ArcSet>& out) {
  if (idx == nodes.size()) {
    ArcSet s(static_cast<size_t>(g.arc_count()), 0);
    for (ArcId e : parent_arc)
      if (e >= 0) s[static_cast<size_t>(e)] = 1;
    if (is_spanning_arborescence(g, s)) out.push_back(std::move(s));
    return;
  }
  const NodeId v = nodes[idx];
  for (ArcId e : g.in_arcs(v)) {
    if (!forbidden.empty() && forbidden[static_cast<size_t>(e)]) continue;
    const NodeId t = g.arc(e).tail;
    // adding t -> v must not close a cycle among already chosen parents
    NodeId u = t;
    bool cyclic = false;
    while (u != g.root() && u >= 0) {
      if (u == v) {
        cyclic = true;
        break;
      }
      u = parent[static_cast<size_t>(u)];
    }
    if (cyclic) continue;
    parent[static_cast<size_t>(v)] = t;
    parent_arc[static_cast<size_t>(v)] = e;
    enumerate_rec(g, forbidden, nodes, idx + 1, parent_arc, parent, out);
    parent[static_cast<size_t>(v)] = -1;
    parent_arc[static_cast<size_t>(v)] = -1;
  }
}

}  // namespace

std::vector<ArcSet> enumerate_arborescences(const Digraph& g,
                                            const ArcSet& forbidden) {
  if (g.node_count() > 10)
    throw std::invalid_argument("enumerate_arborescences limited to 10 nodes");
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (v != g.root()) nodes.push_back(v);
  std::vector<ArcId> parent_arc(static_cast<size_t>(g.node_count()), -1);
  std::vector<NodeId> parent(static_cast<size_t>(g.node_count()), -1);
  std::vector<ArcSet> out;
  enumerate_rec(g, forbidden, nodes, 0, parent_arc, parent, out);
  return out;
}

std::vector<ArcSet> enumerate_arborescences(const Digraph& g) {
  return enumerate_arborescences(g, ArcSet{});
}

}  // namespace pdnr
