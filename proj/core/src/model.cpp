#include "pdnr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdnr {

NodeId NetworkCase::node_of_bus(int bus_id) const {
  for (size_t v = 0; v < bus_ids.size(); ++v)
    if (bus_ids[v] == bus_id) return static_cast<NodeId>(v);
  throw std::out_of_range("unknown bus id " + std::to_string(bus_id));
}

int NetworkCase::line_between(int bus_a, int bus_b) const {
  for (size_t k = 0; k < lines.size(); ++k) {
    const Arc& a = digraph.arc(lines[k].first);
    const int fa = bus_ids[static_cast<size_t>(a.tail)];
    const int fb = bus_ids[static_cast<size_t>(a.head)];
    if ((fa == bus_a && fb == bus_b) || (fa == bus_b && fb == bus_a))
      return static_cast<int>(k);
  }
  return -1;
}

void NetworkCase::check(double balance_tol) const {
  const size_t na = static_cast<size_t>(arc_count());
  const size_t nv = static_cast<size_t>(node_count());
  if (r.size() != na || x.size() != na || p_cap.size() != na || q_cap.size() != na)
    throw std::invalid_argument("arc data length mismatch");
  if (rho1.size() != nv || rho2.size() != nv)
    throw std::invalid_argument("node data length mismatch");
  for (size_t e = 0; e < na; ++e) {
    if (!(r[e] > 0.0) || !(x[e] > 0.0))
      throw std::invalid_argument("impedances must be strictly positive");
    if (p_cap[e] < 0.0 || q_cap[e] < 0.0)
      throw std::invalid_argument("capacities must be nonnegative");
    const ArcId rev = digraph.reverse_arc(static_cast<ArcId>(e));
    if (rev < 0) throw std::invalid_argument("case arcs must be bidirectional");
    const size_t re = static_cast<size_t>(rev);
    if (r[e] != r[re] || x[e] != x[re] || p_cap[e] != p_cap[re] || q_cap[e] != q_cap[re])
      throw std::invalid_argument("line data must match on both arc directions");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double s1 = std::accumulate(rho1.begin(), rho1.end(), 0.0);
  const double s2 = std::accumulate(rho2.begin(), rho2.end(), 0.0);
  if (std::abs(s1) > balance_tol || std::abs(s2) > balance_tol)
    throw std::invalid_argument("injections must sum to zero");
}

ArcVector apply_A(const NetworkCase& cs, const NodeVector& u) {
  if (u.size() != static_cast<size_t>(cs.node_count()))
    throw std::invalid_argument("node vector length mismatch");
  ArcVector out(static_cast<size_t>(cs.arc_count()));
  for (ArcId e = 0; e < cs.arc_count(); ++e) {
    const Arc& a = cs.digraph.arc(e);
    out[static_cast<size_t>(e)] =
        u[static_cast<size_t>(a.tail)] - u[static_cast<size_t>(a.head)];
  }
  return out;
}

FlowSolution tree_flows(const NetworkCase& cs, const Configuration& cfg) {
  const ArcSet s = cfg.support();
  if (!is_spanning_arborescence(cs.digraph, s))
    throw NotRadialError("configuration is not a spanning arborescence");

  const int n = cs.node_count();
  // parent arc of each node and a root-first ordering
  std::vector<ArcId> parent_arc(static_cast<size_t>(n), -1);
  std::vector<NodeId> order;
  order.reserve(static_cast<size_t>(n));
  order.push_back(cs.root());
  for (size_t qi = 0; qi < order.size(); ++qi) {
    const NodeId v = order[qi];
    for (ArcId e : cs.digraph.out_arcs(v)) {
      if (!s[static_cast<size_t>(e)]) continue;
      const NodeId h = cs.digraph.arc(e).head;
      parent_arc[static_cast<size_t>(h)] = e;
      order.push_back(h);
    }
  }

  // subtree net demand, accumulated leaves-to-root
  NodeVector sub_p(cs.rho1), sub_q(cs.rho2);
  for (size_t qi = order.size(); qi-- > 1;) {
    const NodeId v = order[qi];
    const NodeId par = cs.digraph.arc(parent_arc[static_cast<size_t>(v)]).tail;
    sub_p[static_cast<size_t>(par)] += sub_p[static_cast<size_t>(v)];
    sub_q[static_cast<size_t>(par)] += sub_q[static_cast<size_t>(v)];
  }

  FlowSolution f;
  f.p.assign(static_cast<size_t>(cs.arc_count()), 0.0);
  f.q.assign(static_cast<size_t>(cs.arc_count()), 0.0);
  f.u.assign(static_cast<size_t>(n), 1.0);
  for (size_t qi = 1; qi < order.size(); ++qi) {
    const NodeId v = order[qi];
    const ArcId e = parent_arc[static_cast<size_t>(v)];
    const NodeId par = cs.digraph.arc(e).tail;
    const double pe = -sub_p[static_cast<size_t>(v)];
    const double qe = -sub_q[static_cast<size_t>(v)];
    f.p[static_cast<size_t>(e)] = pe;
    f.q[static_cast<size_t>(e)] = qe;
    f.u[static_cast<size_t>(v)] =
        f.u[static_cast<size_t>(par)] -
        2.0 * (cs.r[static_cast<size_t>(e)] * pe + cs.x[static_cast<size_t>(e)] * qe);
  }
  return f;
}

double sdm_loss(const NetworkCase& cs, const FlowSolution& f) {
  double mw = 0.0;
  for (size_t e = 0; e < f.p.size(); ++e)
    mw += cs.r[e] * (f.p[e] * f.p[e] + f.q[e] * f.q[e]);
  return mw * 1000.0;
}

FeasibilityReport validate(const NetworkCase& cs, const Configuration& cfg,
                           const FlowSolution& f) {
  FeasibilityReport rep;
  const ArcSet s = cfg.support();
  rep.radial = is_spanning_arborescence(cs.digraph, s);

  const double cap_tol = 1e-9;
  rep.flow_capacity_ok = true;
  for (size_t e = 0; e < s.size(); ++e) {
    double viol = 0.0;
    if (s[e]) {
      viol = std::max(std::max(-f.p[e], f.p[e] - cs.p_cap[e]),
                      std::max(-f.q[e], f.q[e] - cs.q_cap[e]));
    } else {
      viol = std::max(std::abs(f.p[e]), std::abs(f.q[e]));
    }
    rep.max_capacity_violation = std::max(rep.max_capacity_violation, viol);
    if (viol > cap_tol) rep.flow_capacity_ok = false;
  }

  rep.voltage_ok = true;
  if (cs.voltage_enabled) {
    const double lo = (1.0 - cs.epsilon) * (1.0 - cs.epsilon);
    const double hi = (1.0 + cs.epsilon) * (1.0 + cs.epsilon);
    for (double uv : f.u) {
      const double viol = std::max(lo - uv, uv - hi);
      rep.max_voltage_violation = std::max(rep.max_voltage_violation, viol);
      if (viol > cap_tol) rep.voltage_ok = false;
    }
  }

  // nodal balance of the active flows against the injections
  NodeVector div_p(static_cast<size_t>(cs.node_count()), 0.0);
  NodeVector div_q(static_cast<size_t>(cs.node_count()), 0.0);
  for (size_t e = 0; e < s.size(); ++e) {
    const Arc& a = cs.digraph.arc(static_cast<ArcId>(e));
    div_p[static_cast<size_t>(a.tail)] += f.p[e];
    div_p[static_cast<size_t>(a.head)] -= f.p[e];
    div_q[static_cast<size_t>(a.tail)] += f.q[e];
    div_q[static_cast<size_t>(a.head)] -= f.q[e];
  }
  rep.balance_ok = true;
  for (size_t v = 0; v < div_p.size(); ++v) {
    const double res = std::max(std::abs(div_p[v] - cs.rho1[v]),
                                std::abs(div_q[v] - cs.rho2[v]));
    rep.max_balance_residual = std::max(rep.max_balance_residual, res);
    if (res > 1e-6) rep.balance_ok = false;
  }
  return rep;
}

std::pair<Configuration, double> brute_force_optimum(const NetworkCase& cs,
                                                     const ArcSet& forbidden) {
  const auto all = enumerate_arborescences(cs.digraph, forbidden);
  bool found = false;
  double best_loss = 0.0;
  Configuration best;
  for (const ArcSet& s : all) {
    Configuration cfg;
    cfg.b.assign(s.size(), 0.0);
    for (size_t e = 0; e < s.size(); ++e) cfg.b[e] = s[e] ? 1.0 : 0.0;
    const FlowSolution f = tree_flows(cs, cfg);
    if (!validate(cs, cfg, f).ok()) continue;
    const double loss = sdm_loss(cs, f);
    if (!found || loss < best_loss) {
      found = true;
      best_loss = loss;
      best = cfg;
    }
  }
  if (!found) throw InfeasibleError("no feasible spanning arborescence");
  return {best, best_loss};
}

std::pair<Configuration, double> brute_force_optimum(const NetworkCase& cs) {
  return brute_force_optimum(cs, ArcSet{});
}

Configuration configuration_from_open_lines(
    const NetworkCase& cs, const std::vector<std::pair<int, int>>& open_lines) {
  std::vector<char> open(cs.lines.size(), 0);
  for (const auto& [a, b] : open_lines) {
    const int k = cs.line_between(a, b);
    if (k < 0)
      throw std::invalid_argument("no line between buses " + std::to_string(a) +
                                  " and " + std::to_string(b));
    open[static_cast<size_t>(k)] = 1;
  }
  // orient the closed lines away from the root
  std::vector<std::vector<std::pair<NodeId, ArcId>>> adj(
      static_cast<size_t>(cs.node_count()));
  for (size_t k = 0; k < cs.lines.size(); ++k) {
    if (open[k]) continue;
    const ArcId fwd = cs.lines[k].first;
    const ArcId rev = cs.lines[k].second;
    const Arc& a = cs.digraph.arc(fwd);
    adj[static_cast<size_t>(a.tail)].push_back({a.head, fwd});
    adj[static_cast<size_t>(a.head)].push_back({a.tail, rev});
  }
  Configuration cfg;
  cfg.b.assign(static_cast<size_t>(cs.arc_count()), 0.0);
  std::vector<char> seen(static_cast<size_t>(cs.node_count()), 0);
  std::vector<NodeId> stack{cs.root()};
  seen[static_cast<size_t>(cs.root())] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const auto& [w, e] : adj[static_cast<size_t>(v)]) {
      if (seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = 1;
      cfg.b[static_cast<size_t>(e)] = 1.0;
      stack.push_back(w);
    }
  }
  if (!is_spanning_arborescence(cs.digraph, cfg.support()))
    throw NotRadialError("closed lines do not form a spanning tree");
  return cfg;
}

std::vector<std::pair<int, int>> open_lines_of(const NetworkCase& cs,
                                               const Configuration& cfg) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [fwd, rev] : cs.lines) {
    if (cfg.b[static_cast<size_t>(fwd)] > 0.5 || cfg.b[static_cast<size_t>(rev)] > 0.5)
      continue;
    const Arc& a = cs.digraph.arc(fwd);
    out.push_back({cs.bus_of_node(a.tail), cs.bus_of_node(a.head)});
  }
  return out;
}

}  // namespace pdnr
