#pragma once

// Shared helpers for the test binaries: a seeded random economy generator and
// an exhaustive welfare oracle that never touches the flow solver.

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stp/economy.hpp"
#include "stp/paths.hpp"

namespace stp::testing {

struct RandomLimits {
  int max_drivers = 3;
  int max_riders = 6;
  int max_locations = 3;
  int max_horizon = 3;
  int max_distance = 2;
  Money max_value = 20;
  Money max_cost = 4;
  bool allow_unentered = true;
  bool zero_costs = false;
};

inline Economy random_economy(std::uint64_t seed, const RandomLimits& lim = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto money = [&rng](Money lo, Money hi) { return std::uniform_int_distribution<Money>(lo, hi)(rng); };

  Economy e;
  e.horizon = pick(1, lim.max_horizon);
  const int n = pick(1, lim.max_locations);
  for (int a = 0; a < n; ++a) e.locations.push_back(std::string(1, static_cast<char>('A' + a)));
  e.dist.assign(n, std::vector<int>(n, 1));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) e.dist[a][b] = e.dist[b][a] = pick(1, lim.max_distance);

  e.trip_cost.assign(static_cast<std::size_t>(e.horizon) * n * n, 0);
  e.exit_cost.assign(e.horizon + 1, 0);
  if (!lim.zero_costs) {
    if (pick(0, 1) == 0) {
      e.set_linear_costs(money(0, lim.max_cost), money(0, lim.max_cost));
    } else {
      for (const Trip& t : feasible_trips(e)) e.trip_cost[(static_cast<std::size_t>(t.start) * n + t.from) * n + t.to] = money(0, lim.max_cost);
      for (int d = 1; d <= e.horizon; ++d) e.exit_cost[d] = money(0, lim.max_cost);
    }
  }

  const int drivers = pick(1, lim.max_drivers);
  for (int i = 0; i < drivers; ++i) {
    const bool entered = !lim.allow_unentered || pick(0, 2) != 0;
    e.drivers.push_back({entered, pick(0, n - 1), pick(0, e.horizon - 1)});
  }
  const auto trips = feasible_trips(e);
  const int riders = pick(0, lim.max_riders);
  for (int j = 0; j < riders && !trips.empty(); ++j) {
    const Trip& t = trips[pick(0, static_cast<int>(trips.size()) - 1)];
    e.riders.push_back({t.from, t.to, t.start, money(0, lim.max_value)});
  }
  require_valid(e);
  return e;
}

// Exhaustive welfare: every combination of driver paths, with each traversed
// trip serving its highest-value riders. Combinations are merged on the
// vector of (capped) trip usage counts, which is all the rider side sees.
inline Money brute_force_welfare(const Economy& e) {
  std::map<Trip, std::vector<Money>> by_trip;
  for (const auto& r : e.riders) by_trip[r.trip()].push_back(r.value);
  std::map<Trip, int> slot;
  std::vector<std::vector<Money>> values;
  for (auto& [trip, vs] : by_trip) {
    std::sort(vs.rbegin(), vs.rend());
    slot[trip] = static_cast<int>(values.size());
    values.push_back(vs);
  }

  std::map<std::vector<int>, Money> cheapest{{std::vector<int>(values.size(), 0), 0}};
  for (const auto& d : e.drivers) {
    const auto paths = enumerate_feasible_paths(e, d);
    std::map<std::vector<int>, Money> next;
    for (const auto& [usage, cost] : cheapest) {
      for (const auto& p : paths) {
        std::vector<int> u = usage;
        for (const auto& t : p.trips) {
          const auto it = slot.find(t);
          if (it == slot.end()) continue;
          int& k = u[it->second];
          k = std::min<int>(k + 1, static_cast<int>(values[it->second].size()));
        }
        const Money c = cost + path_cost(e, d, p);
        auto [pos, inserted] = next.emplace(std::move(u), c);
        if (!inserted) pos->second = std::min(pos->second, c);
      }
    }
    cheapest = std::move(next);
  }

  Money best = std::numeric_limits<Money>::min();
  for (const auto& [usage, cost] : cheapest) {
    Money w = -cost;
    for (std::size_t s = 0; s < usage.size(); ++s)
      for (int k = 0; k < usage[s]; ++k) w += values[s][k];
    best = std::max(best, w);
  }
  return best;
}

// Best profit over every feasible path of the driver when each trip pays
// `price(trip)`; never-enter (or immediate exit) is included.
inline Money brute_force_best_path(const Economy& e, const DriverType& d, const std::function<Money(const Trip&)>& price) {
  Money best = std::numeric_limits<Money>::min();
  for (const auto& p : enumerate_feasible_paths(e, d)) {
    Money v = -path_cost(e, d, p);
    for (const auto& t : p.trips) v += price(t);
    best = std::max(best, v);
  }
  return best;
}

inline Economy with_extra_driver(Economy e, const DriverType& d) {
  e.drivers.push_back(d);
  return e;
}

}  // namespace stp::testing
