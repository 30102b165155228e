#include <doctest.h>

#include <sstream>

#include "stp/fixtures.hpp"
#include "stp/flow.hpp"
#include "stp/plan.hpp"
#include "support.hpp"

using namespace stp;

namespace {

int count_class(const FlowNetwork& net, EdgeClass cls) {
  int n = 0;
  for (const auto& e : net.edges) n += e.cls == cls;
  return n;
}

}  // namespace

TEST_SUITE("flow") {
  TEST_CASE("network layout of the one-driver economy") {
    const Economy e = fixture_economy("example1");
    const FlowNetwork net = build_network(e);
    CHECK(net.node_count() == 2 * 3 + 1 + 1);
    CHECK(count_class(net, EdgeClass::Rider) == 3);
    CHECK(count_class(net, EdgeClass::Relocate) == 6);
    CHECK(count_class(net, EdgeClass::Exit) == 6);
    // entry to (A,0) plus the stay-out edge of a driver who has not entered
    CHECK(count_class(net, EdgeClass::Entry) == 2);
    CHECK(net.supply[net.driver_node(0)] == 1);
    CHECK(net.total_supply() == 1);
    for (std::size_t k = 1; k < net.edges.size(); ++k)
      CHECK(static_cast<int>(net.edges[k - 1].cls) <= static_cast<int>(net.edges[k].cls));
  }

  TEST_CASE("network dump lines name nodes by location and time") {
    const Economy e = fixture_economy("example1");
    const FlowNetwork net = build_network(e);
    const OptimalFlow flow = solve_min_cost_flow(net);
    std::istringstream lines(dump_network(e, net, &flow));
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "# class tail head upper cost flow");
    CHECK(first == "E1 A@0 A@1 1 -3 1 r0");
    CHECK(node_label(e, net, net.sink()) == "S");
    CHECK(node_label(e, net, net.driver_node(0)) == "D0");
  }

  TEST_CASE("solver welfare equals the exhaustive oracle") {
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
      const Economy e = testing::random_economy(seed);
      CAPTURE(seed);
      CHECK(omega(e) == testing::brute_force_welfare(e));
    }
  }

  TEST_CASE("the favored-rider solve stays optimal and carries the rider when it can") {
    for (std::uint64_t seed = 1100; seed < 1160; ++seed) {
      const Economy e = testing::random_economy(seed);
      const FlowNetwork net = build_network(e);
      const Money best = solve_min_cost_flow(net).welfare();
      for (int j = 0; j < e.num_riders(); ++j) {
        const OptimalFlow f = solve_min_cost_flow(net, SolveOptions{j});
        CHECK(f.welfare() == best);
        // Some optimum serves rider j iff dropping that rider costs exactly v_j.
        Economy forced = e;
        forced.riders[j].value += 1;
        const bool can_serve = omega(forced) == best + 1;
        const Dispatch d = decompose_flow(net, f, e);
        CHECK((d.picked[j] != 0) == can_serve);
      }
    }
  }

  TEST_CASE("decomposition yields one path per driver with the flow's welfare") {
    for (std::uint64_t seed = 1200; seed < 1250; ++seed) {
      const Economy e = testing::random_economy(seed);
      const FlowNetwork net = build_network(e);
      const OptimalFlow f = solve_min_cost_flow(net);
      const Dispatch d = decompose_flow(net, f, e);
      REQUIRE(d.paths.size() == e.drivers.size());
      CHECK(d.welfare == f.welfare());
      for (int i = 0; i < e.num_drivers(); ++i) CHECK_NOTHROW(check_path(e, e.drivers[i], d.paths[i].path()));
    }
  }

  TEST_CASE("boundary perturbations validate the supply") {
    const Economy e = fixture_economy("superbowl");
    FlowNetwork net = build_network(e);
    CHECK_THROWS_AS(perturb_boundary(net, {{net.driver_node(0), -2}}), ModelError);
    CHECK_THROWS_AS(perturb_boundary(net, {{net.sink(), 1}}), ModelError);
    CHECK(omega(e, {{build_network(e).node(2, 1), 1}}) >= omega(e));
  }
}

TEST_SUITE("duality") {
  TEST_CASE("both potential vectors satisfy complementary slackness") {
    for (std::uint64_t seed = 2000; seed < 2100; ++seed) {
      const Economy e = testing::random_economy(seed);
      const FlowNetwork net = build_network(e);
      const OptimalFlow f = solve_min_cost_flow(net);
      CAPTURE(seed);
      CHECK(check_complementary_slackness(net, f, potentials_pessimal(net, f)).empty());
      CHECK(check_complementary_slackness(net, f, potentials_optimal(net, f)).empty());
    }
  }

  TEST_CASE("driver potentials are the replica gain and the removal loss") {
    for (std::uint64_t seed = 2100; seed < 2160; ++seed) {
      const Economy e = testing::random_economy(seed);
      const FlowNetwork net = build_network(e);
      const OptimalFlow f = solve_min_cost_flow(net);
      const Potentials lo = potentials_pessimal(net, f);
      const Potentials hi = potentials_optimal(net, f);
      const Money base = testing::brute_force_welfare(e);
      CAPTURE(seed);
      for (int i = 0; i < e.num_drivers(); ++i) {
        CHECK(lo.driver(i) <= hi.driver(i));
        CHECK(lo.driver(i) == testing::brute_force_welfare(testing::with_extra_driver(e, e.drivers[i])) - base);
        CHECK(hi.driver(i) == base - testing::brute_force_welfare(without_driver(e, i)));
      }
    }
  }

  TEST_CASE("potentials do not depend on which optimal flow was found") {
    for (std::uint64_t seed = 2200; seed < 2240; ++seed) {
      const Economy e = testing::random_economy(seed);
      const FlowNetwork net = build_network(e);
      const OptimalFlow a = solve_min_cost_flow(net);
      for (int j = 0; j < e.num_riders(); ++j) {
        const OptimalFlow b = solve_min_cost_flow(net, SolveOptions{j});
        const Potentials pa = potentials_pessimal(net, a);
        const Potentials pb = potentials_pessimal(net, b);
        for (int i = 0; i < e.num_drivers(); ++i) CHECK(pa.driver(i) == pb.driver(i));
      }
    }
  }

  TEST_CASE("local exchange: extra supply at a node has decreasing returns") {
    std::mt19937_64 rng(7);
    for (int draw = 0; draw < 100; ++draw) {
      const Economy e = testing::random_economy(3000 + draw);
      const FlowNetwork net = build_network(e);
      const int nodes = e.num_locations() * e.horizon;  // (a, t) with t < T
      const int b = static_cast<int>(rng() % nodes);
      const int a2 = static_cast<int>(rng() % nodes);
      const Money w0 = omega(e);
      const Money wb = omega(e, {{b, 1}});
      const Money wbb = omega(e, {{b, 2}});
      const Money wa = omega(e, {{a2, 1}});
      const Money wab = omega(e, {{a2, 1}, {b, 1}});
      CAPTURE(draw);
      CHECK(wb - w0 >= wbb - wb);
      CHECK(wab - wa >= wbb - wb);
    }
  }
}
