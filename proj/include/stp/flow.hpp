#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stp/economy.hpp"
#include "stp/paths.hpp"

namespace stp {

// Edge classes of the time-expanded network, in their sort order.
enum class EdgeClass : int { Rider = 1, Relocate = 2, Exit = 3, Entry = 4 };

struct FlowEdge {
  EdgeClass cls = EdgeClass::Relocate;
  int tail = 0;
  int head = 0;
  std::int64_t upper = 0;
  Money cost = 0;
  int rider = -1;   // Rider edges
  int driver = -1;  // Entry edges
};

// Nodes: (a, t) for every location and t in [0, T], one source node per
// driver, and a sink. Node (a, t) has id t * L + a; driver i has id
// L * (T + 1) + i; the sink comes last. Edges are sorted by
// (class, tail, head, rider).
struct FlowNetwork {
  int num_locations = 0;
  int horizon = 0;
  int num_drivers = 0;
  std::vector<FlowEdge> edges;
  std::vector<std::int64_t> supply;  // +units at sources, -total at the sink

  int node_count() const { return num_locations * (horizon + 1) + num_drivers + 1; }
  int node(int loc, int t) const { return t * num_locations + loc; }
  int driver_node(int i) const { return num_locations * (horizon + 1) + i; }
  int sink() const { return node_count() - 1; }
  bool is_location_node(int v) const { return v < num_locations * (horizon + 1); }
  int node_loc(int v) const { return v % num_locations; }
  int node_time(int v) const { return v / num_locations; }
  std::int64_t total_supply() const { return -supply[sink()]; }
};

FlowNetwork build_network(const Economy& econ);

// Adds `amount` units of supply at `node` (negative amounts remove units from
// a driver source). Unbounded edge capacities track the total supply.
struct BoundaryDelta {
  int node = 0;
  int amount = 0;
};
void perturb_boundary(FlowNetwork& net, const std::vector<BoundaryDelta>& delta);

struct OptimalFlow {
  std::vector<std::int64_t> flow;  // per edge, parallel to FlowNetwork::edges
  Money cost = 0;

  Money welfare() const { return -cost; }
};

struct SolveOptions {
  // When >= 0, ties among optimal flows are broken in favour of carrying
  // this rider. The returned flow is optimal for the original costs.
  int favored_rider = -1;
};

OptimalFlow solve_min_cost_flow(const FlowNetwork& net, const SolveOptions& options = {});

struct Dispatch {
  std::vector<char> picked;         // per rider
  std::vector<ActionPath> paths;    // per driver
  Money welfare = 0;
};

// Splits an optimal flow (unit supply per driver source) into one action
// path per driver, following edges in sorted order.
Dispatch decompose_flow(const FlowNetwork& net, const OptimalFlow& flow, const Economy& econ);

// Node-indexed dual values. Potentials of location nodes that no driver can
// reach carry a large sentinel (see potentials_optimal).
struct Potentials {
  std::vector<Money> value;
  int num_locations = 0;
  int horizon = 0;

  Money at(int loc, int t) const { return value[static_cast<std::size_t>(t) * num_locations + loc]; }
  Money driver(int i) const { return value[static_cast<std::size_t>(num_locations) * (horizon + 1) + i]; }
};

// Phi(v) = -(shortest residual distance from v to the sink): the welfare
// gained by one more unit of supply at v. Throws std::logic_error when the
// residual graph has a negative cycle (the flow was not optimal).
Potentials potentials_pessimal(const FlowNetwork& net, const OptimalFlow& flow);

// Psi(v) = shortest residual distance from the sink to v: the welfare lost
// by removing one unit of supply at v. Nodes the sink cannot reach carry no
// flow and get M * (T + 1 - t) with M exceeding every finite magnitude, which
// keeps all dual constraints satisfied.
Potentials potentials_optimal(const FlowNetwork& net, const OptimalFlow& flow);

// Dual feasibility plus the six complementary-slackness conditions between
// a flow and node potentials. Returns human-readable violations.
std::vector<std::string> check_complementary_slackness(const FlowNetwork& net, const OptimalFlow& flow,
                                                       const Potentials& phi);

// Best welfare of the economy with its boundary perturbed. Throws ModelError
// when the perturbation leaves a negative supply.
Money omega(const Economy& econ, const std::vector<BoundaryDelta>& delta = {});

std::string node_label(const Economy& econ, const FlowNetwork& net, int v);

// One edge per line: class tail head upper cost flow.
std::string dump_network(const Economy& econ, const FlowNetwork& net, const OptimalFlow* flow = nullptr);

}  // namespace stp
