#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pdnr/graph.hpp"

namespace pdnr {

/// Immutable grid description. Power flows in MW/MVAr; impedances are stored
/// already divided by v0^2 so that sum r*(p^2+q^2) is directly a power in MW.
/// Injections are signed: supply positive, demand negative, grand total zero.
struct NetworkCase {
  Digraph digraph;
  ArcVector r;      // per arc, ohm / kV^2
  ArcVector x;      // per arc, ohm / kV^2
  ArcVector p_cap;  // MW
  ArcVector q_cap;  // MVAr
  NodeVector rho1;  // MW
  NodeVector rho2;  // MVAr
  double epsilon = 0.05;   // half width of the squared-voltage band
  double v0_kv = 1.0;      // base voltage
  bool voltage_enabled = true;
  std::vector<NodeId> substations;  // relay nodes; metadata only
  std::vector<int> bus_ids;         // external bus id per internal node
  // forward/reverse arc id per physical line, in file order
  std::vector<std::pair<ArcId, ArcId>> lines;
  std::string name;

  NodeId root() const { return digraph.root(); }
  int node_count() const { return digraph.node_count(); }
  int arc_count() const { return digraph.arc_count(); }

  NodeId node_of_bus(int bus_id) const;
  int bus_of_node(NodeId v) const { return bus_ids[static_cast<size_t>(v)]; }

  /// Line index whose endpoints match {bus_a, bus_b} in either order, -1 if
  /// absent.
  int line_between(int bus_a, int bus_b) const;

  /// Checks the structural invariants (positive impedances, symmetric line
  /// data, balance within tol, epsilon range). Throws std::invalid_argument.
  void check(double balance_tol = 1e-9) const;
};

/// Binary arc activation vector; feasible iff its support is a spanning
/// arborescence rooted at the case root.
struct Configuration {
  ArcVector b;

  ArcSet support() const {
    ArcSet s(b.size(), 0);
    for (size_t e = 0; e < b.size(); ++e) s[e] = b[e] > 0.5 ? 1 : 0;
    return s;
  }
};

struct FlowSolution {
  ArcVector p;   // MW, zero on inactive arcs
  ArcVector q;   // MVAr
  NodeVector u;  // squared voltage ratio, u[root] = 1
};

struct FeasibilityReport {
  bool radial = false;
  bool flow_capacity_ok = false;
  bool voltage_ok = false;
  bool balance_ok = false;
  double max_capacity_violation = 0.0;  // MW / MVAr
  double max_voltage_violation = 0.0;   // squared ratio
  double max_balance_residual = 0.0;    // MW / MVAr

  bool ok() const { return radial && flow_capacity_ok && voltage_ok && balance_ok; }
};

/// Difference operator: per arc e=(i,j), returns u_i - u_j.
ArcVector apply_A(const NetworkCase& cs, const NodeVector& u);

/// Deterministic flow/voltage evaluation on a spanning arborescence: branch
/// power equals the net demand of the subtree it feeds (quadratic loss terms
/// dropped), voltages by a forward sweep from the root with u_root = 1.
/// Throws NotRadialError when cfg is not a spanning arborescence.
FlowSolution tree_flows(const NetworkCase& cs, const Configuration& cfg);

/// Total approximate loss sum_e r_e (p_e^2 + q_e^2), in kW.
double sdm_loss(const NetworkCase& cs, const FlowSolution& f);

/// Per-check feasibility report; violations are reported, never thrown.
FeasibilityReport validate(const NetworkCase& cs, const Configuration& cfg,
                           const FlowSolution& f);

/// Enumerates every spanning arborescence (node_count <= 10), evaluates the
/// feasible ones and returns the loss minimizer. Throws InfeasibleError when
/// no arborescence passes validation.
std::pair<Configuration, double> brute_force_optimum(const NetworkCase& cs,
                                                     const ArcSet& forbidden);
std::pair<Configuration, double> brute_force_optimum(const NetworkCase& cs);

/// Builds the configuration that closes every line except the listed open
/// ones (external bus id pairs, order-insensitive) and orients the closed
/// lines away from the root. Throws NotRadialError / std::invalid_argument.
Configuration configuration_from_open_lines(
    const NetworkCase& cs, const std::vector<std::pair<int, int>>& open_lines);

/// Lists open lines of a configuration as external bus id pairs in file
/// order: lines with both arc directions inactive.
std::vector<std::pair<int, int>> open_lines_of(const NetworkCase& cs,
                                               const Configuration& cfg);

}  // namespace pdnr
