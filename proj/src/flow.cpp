#include "stp/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace stp {
namespace {

constexpr Money kInf = std::numeric_limits<Money>::max() / 4;

// Residual graph with paired arcs: arc 2k is edge k, arc 2k+1 its reverse.
struct Residual {
  std::vector<int> head;
  std::vector<std::int64_t> cap;
  std::vector<Money> cost;
  std::vector<std::vector<int>> adj;

  explicit Residual(int nodes) : adj(nodes) {}

  int add(int u, int v, std::int64_t c, Money w) {
    const int id = static_cast<int>(head.size());
    head.push_back(v);
    cap.push_back(c);
    cost.push_back(w);
    adj[u].push_back(id);
    head.push_back(u);
    cap.push_back(0);
    cost.push_back(-w);
    adj[v].push_back(id + 1);
    return id;
  }
};

std::vector<int> topological_order(const FlowNetwork& net) {
  std::vector<int> order;
  for (int i = 0; i < net.num_drivers; ++i) order.push_back(net.driver_node(i));
  for (int t = 0; t <= net.horizon; ++t)
    for (int a = 0; a < net.num_locations; ++a) order.push_back(net.node(a, t));
  order.push_back(net.sink());
  return order;
}

void set_unbounded_capacity(FlowNetwork& net) {
  const std::int64_t total = net.total_supply();
  for (auto& e : net.edges)
    if (e.cls != EdgeClass::Rider) e.upper = total;
}

struct Arc {
  int to;
  Money cost;
};

// Residual arcs used for the extreme potentials. Unbounded edges are always
// traversable forward; rider edges only while unsaturated.
std::vector<std::vector<Arc>> potential_arcs(const FlowNetwork& net, const OptimalFlow& flow, bool reversed) {
  std::vector<std::vector<Arc>> adj(net.node_count());
  auto add = [&](int u, int v, Money w) {
    if (reversed)
      adj[v].push_back({u, w});
    else
      adj[u].push_back({v, w});
  };
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const auto& e = net.edges[k];
    const auto f = flow.flow[k];
    if (e.cls == EdgeClass::Rider) {
      if (f < e.upper) add(e.tail, e.head, e.cost);
    } else {
      add(e.tail, e.head, e.cost);
    }
    if (f > 0) add(e.head, e.tail, -e.cost);
  }
  return adj;
}

// Label-correcting shortest paths from `source`; throws on a negative cycle.
std::vector<Money> label_correcting(const std::vector<std::vector<Arc>>& adj, int source) {
  const int n = static_cast<int>(adj.size());
  std::vector<Money> dist(n, kInf);
  std::vector<int> hops(n, 0);  // arcs on the current shortest path
  std::vector<char> queued(n, 0);
  std::deque<int> queue;
  dist[source] = 0;
  queue.push_back(source);
  queued[source] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    for (const auto& arc : adj[u]) {
      const Money nd = dist[u] + arc.cost;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        hops[arc.to] = hops[u] + 1;
        if (hops[arc.to] >= n) throw std::logic_error("negative cycle in residual graph");
        if (!queued[arc.to]) {
          queued[arc.to] = 1;
          queue.push_back(arc.to);
        }
      }
    }
  }
  return dist;
}

Potentials make_potentials(const FlowNetwork& net) {
  Potentials p;
  p.num_locations = net.num_locations;
  p.horizon = net.horizon;
  p.value.assign(net.node_count(), 0);
  return p;
}

}  // namespace

FlowNetwork build_network(const Economy& econ) {
  FlowNetwork net;
  net.num_locations = econ.num_locations();
  net.horizon = econ.horizon;
  net.num_drivers = econ.num_drivers();
  net.supply.assign(net.node_count(), 0);
  for (int i = 0; i < net.num_drivers; ++i) net.supply[net.driver_node(i)] = 1;
  net.supply[net.sink()] = -net.num_drivers;
  const std::int64_t unbounded = net.num_drivers;

  for (int j = 0; j < econ.num_riders(); ++j) {
    const auto& r = econ.riders[j];
    const int arrive = r.time + econ.distance(r.origin, r.dest);
    net.edges.push_back({EdgeClass::Rider, net.node(r.origin, r.time), net.node(r.dest, arrive), 1,
                         econ.cost(r.origin, r.dest, r.time) - r.value, j, -1});
  }
  for (const auto& trip : feasible_trips(econ))
    net.edges.push_back({EdgeClass::Relocate, net.node(trip.from, trip.start), net.node(trip.to, econ.arrival(trip)),
                         unbounded, econ.cost(trip), -1, -1});
  for (int t = 0; t <= econ.horizon; ++t)
    for (int a = 0; a < net.num_locations; ++a)
      net.edges.push_back({EdgeClass::Exit, net.node(a, t), net.sink(), unbounded, econ.kappa(econ.horizon - t), -1, -1});
  for (int i = 0; i < net.num_drivers; ++i) {
    const auto& d = econ.drivers[i];
    net.edges.push_back({EdgeClass::Entry, net.driver_node(i), net.node(d.loc, d.time), unbounded, 0, -1, i});
    if (!d.entered) net.edges.push_back({EdgeClass::Entry, net.driver_node(i), net.sink(), unbounded, 0, -1, i});
  }
  std::stable_sort(net.edges.begin(), net.edges.end(), [](const FlowEdge& x, const FlowEdge& y) {
    return std::tuple(static_cast<int>(x.cls), x.tail, x.head, x.rider) <
           std::tuple(static_cast<int>(y.cls), y.tail, y.head, y.rider);
  });
  return net;
}

void perturb_boundary(FlowNetwork& net, const std::vector<BoundaryDelta>& delta) {
  for (const auto& d : delta) {
    if (d.node < 0 || d.node >= net.sink()) throw ModelError("boundary perturbation at an invalid node");
    net.supply[d.node] += d.amount;
    net.supply[net.sink()] -= d.amount;
    if (net.supply[d.node] < 0) throw ModelError("boundary perturbation leaves a negative supply");
  }
  set_unbounded_capacity(net);
}

OptimalFlow solve_min_cost_flow(const FlowNetwork& net, const SolveOptions& options) {
  const int n = net.node_count();
  const int source = n;  // super source feeding every supply node
  Residual g(n + 1);
  const Money scale = options.favored_rider >= 0 ? 2 : 1;
  for (const auto& e : net.edges) {
    Money w = e.cost * scale;
    if (e.cls == EdgeClass::Rider && e.rider == options.favored_rider) w -= 1;
    g.add(e.tail, e.head, e.upper, w);
  }
  std::int64_t total = 0;
  for (int v = 0; v < net.sink(); ++v) {
    if (net.supply[v] > 0) {
      g.add(source, v, net.supply[v], 0);
      total += net.supply[v];
    }
  }

  // Initial potentials: shortest distances from a virtual root joined to
  // every node by zero-cost arcs, computed in topological order.
  std::vector<Money> pot(n + 1, 0);
  std::vector<int> order = topological_order(net);
  order.insert(order.begin(), source);
  for (int u : order)
    for (int id : g.adj[u])
      if (g.cap[id] > 0) pot[g.head[id]] = std::min(pot[g.head[id]], pot[u] + g.cost[id]);

  std::vector<Money> dist(n + 1);
  std::vector<int> prev_arc(n + 1);
  using Item = std::pair<Money, int>;
  std::int64_t sent = 0;
  const int sink = net.sink();
  while (sent < total) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev_arc.begin(), prev_arc.end(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0;
    pq.push({0, source});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d != dist[u]) continue;
      for (int id : g.adj[u]) {
        if (g.cap[id] <= 0) continue;
        const int v = g.head[id];
        const Money nd = d + g.cost[id] + pot[u] - pot[v];
        if (nd < dist[v]) {
          dist[v] = nd;
          prev_arc[v] = id;
          pq.push({nd, v});
        }
      }
    }
    if (dist[sink] >= kInf) throw std::logic_error("flow network has no route to the sink");
    for (int v = 0; v <= n; ++v) pot[v] += std::min(dist[v], dist[sink]);
    std::int64_t push = total - sent;
    for (int v = sink; v != source; v = g.head[prev_arc[v] ^ 1]) push = std::min(push, g.cap[prev_arc[v]]);
    for (int v = sink; v != source; v = g.head[prev_arc[v] ^ 1]) {
      g.cap[prev_arc[v]] -= push;
      g.cap[prev_arc[v] ^ 1] += push;
    }
    sent += push;
  }

  OptimalFlow out;
  out.flow.resize(net.edges.size());
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    out.flow[k] = g.cap[2 * k + 1];
    out.cost += out.flow[k] * net.edges[k].cost;
  }
  return out;
}

Dispatch decompose_flow(const FlowNetwork& net, const OptimalFlow& flow, const Economy& econ) {
  std::vector<std::vector<int>> out_edges(net.node_count());
  for (std::size_t k = 0; k < net.edges.size(); ++k) out_edges[net.edges[k].tail].push_back(static_cast<int>(k));
  std::vector<std::int64_t> left = flow.flow;

  Dispatch d;
  d.picked.assign(econ.riders.size(), 0);
  d.paths.resize(econ.drivers.size());
  Money welfare = 0;
  for (int i = 0; i < net.num_drivers; ++i) {
    int u = net.driver_node(i);
    ActionPath& path = d.paths[i];
    while (u != net.sink()) {
      int chosen = -1;
      for (int k : out_edges[u]) {
        if (left[k] > 0) {
          chosen = k;
          break;
        }
      }
      if (chosen < 0) throw std::logic_error("flow decomposition stalled: flow is not conserved");
      --left[chosen];
      const auto& e = net.edges[chosen];
      if (e.cls == EdgeClass::Rider || e.cls == EdgeClass::Relocate) {
        const Trip trip{net.node_loc(e.tail), net.node_loc(e.head), net.node_time(e.tail)};
        path.legs.push_back({trip, e.rider});
        if (e.rider >= 0) {
          d.picked[e.rider] = 1;
          welfare += econ.riders[e.rider].value;
        }
      }
      u = e.head;
    }
    welfare -= path_cost(econ, econ.drivers[i], path.path());
  }
  for (auto f : left)
    if (f != 0) throw std::logic_error("flow decomposition left unassigned flow");
  if (welfare != flow.welfare()) throw std::logic_error("decomposed plan welfare differs from flow objective");
  d.welfare = welfare;
  return d;
}

Potentials potentials_pessimal(const FlowNetwork& net, const OptimalFlow& flow) {
  const auto dist = label_correcting(potential_arcs(net, flow, true), net.sink());
  Potentials p = make_potentials(net);
  for (int v = 0; v < net.node_count(); ++v) {
    if (dist[v] >= kInf) throw std::logic_error("node cannot reach the sink");
    p.value[v] = -dist[v];
  }
  return p;
}

Potentials potentials_optimal(const FlowNetwork& net, const OptimalFlow& flow) {
  const auto dist = label_correcting(potential_arcs(net, flow, false), net.sink());
  Potentials p = make_potentials(net);
  Money bound = 1;
  for (Money d : dist)
    if (d < kInf) bound += d < 0 ? -d : d;
  for (const auto& e : net.edges) bound += e.cost < 0 ? -e.cost : e.cost;
  for (int v = 0; v < net.node_count(); ++v) {
    if (dist[v] < kInf) {
      p.value[v] = dist[v];
    } else if (net.is_location_node(v)) {
      p.value[v] = bound * (net.horizon + 1 - net.node_time(v));
    } else {
      p.value[v] = bound * (net.horizon + 2);
    }
  }
  return p;
}

std::vector<std::string> check_complementary_slackness(const FlowNetwork& net, const OptimalFlow& flow,
                                                       const Potentials& phi) {
  std::vector<std::string> bad;
  auto where = [&](std::size_t k) {
    const auto& e = net.edges[k];
    return "edge " + std::to_string(k) + " (class " + std::to_string(static_cast<int>(e.cls)) + ", " +
           std::to_string(e.tail) + "->" + std::to_string(e.head) + ")";
  };
  if (phi.value[net.sink()] != 0) bad.push_back("sink potential is not zero");
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const auto& e = net.edges[k];
    const Money lhs = phi.value[e.tail] - phi.value[e.head];
    const auto f = flow.flow[k];
    if (e.cls == EdgeClass::Rider) {
      const Money gain = -e.cost;  // v - c
      const Money mu = std::max<Money>(0, gain - lhs);
      if (f > 0 && lhs + mu != gain) bad.push_back(where(k) + ": served rider edge not tight");
      if (mu > 0 && f != e.upper) bad.push_back(where(k) + ": positive rider dual on unsaturated edge");
    } else {
      if (lhs < -e.cost) bad.push_back(where(k) + ": dual constraint violated");
      if (f > 0 && lhs != -e.cost) bad.push_back(where(k) + ": edge carries flow but is not tight");
    }
  }
  return bad;
}

Money omega(const Economy& econ, const std::vector<BoundaryDelta>& delta) {
  FlowNetwork net = build_network(econ);
  perturb_boundary(net, delta);
  return solve_min_cost_flow(net).welfare();
}

std::string node_label(const Economy& econ, const FlowNetwork& net, int v) {
  if (v == net.sink()) return "S";
  if (net.is_location_node(v)) return econ.locations[net.node_loc(v)] + "@" + std::to_string(net.node_time(v));
  return "D" + std::to_string(v - net.driver_node(0));
}

std::string dump_network(const Economy& econ, const FlowNetwork& net, const OptimalFlow* flow) {
  std::ostringstream os;
  os << "# class tail head upper cost flow\n";
  for (std::size_t k = 0; k < net.edges.size(); ++k) {
    const auto& e = net.edges[k];
    os << 'E' << static_cast<int>(e.cls) << ' ' << node_label(econ, net, e.tail) << ' '
       << node_label(econ, net, e.head) << ' ' << e.upper << ' ' << e.cost << ' '
       << (flow ? flow->flow[k] : 0);
    if (e.rider >= 0) os << " r" << e.rider;
    os << '\n';
  }
  return os.str();
}

}  // namespace stp
