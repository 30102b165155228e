#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stp {

// All money is held in integer minor units. Nothing on a solver path touches
// floating point.
using Money = std::int64_t;

// Raised for malformed inputs: bad economies, infeasible paths, illegal
// actions. Invariant violations inside the engine use std::logic_error.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trip {
  int from = 0;
  int to = 0;
  int start = 0;

  auto operator<=>(const Trip&) const = default;
};

struct DriverType {
  bool entered = true;  // already on the platform (committed to stay)
  int loc = 0;
  int time = 0;

  auto operator<=>(const DriverType&) const = default;
};

struct Rider {
  int origin = 0;
  int dest = 0;
  int time = 0;
  Money value = 0;

  Trip trip() const { return {origin, dest, time}; }
  auto operator<=>(const Rider&) const = default;
};

struct Economy {
  int horizon = 1;
  std::vector<std::string> locations;
  std::vector<std::vector<int>> dist;
  // Flat table indexed by (t, a, b) for t in [0, horizon).
  std::vector<Money> trip_cost;
  // exit_cost[delta] for delta in [0, horizon].
  std::vector<Money> exit_cost;
  std::vector<DriverType> drivers;
  std::vector<Rider> riders;

  int num_locations() const { return static_cast<int>(locations.size()); }
  int num_drivers() const { return static_cast<int>(drivers.size()); }
  int num_riders() const { return static_cast<int>(riders.size()); }

  int distance(int a, int b) const { return dist[a][b]; }
  Money cost(int a, int b, int t) const {
    const int n = num_locations();
    return trip_cost[(static_cast<std::size_t>(t) * n + a) * n + b];
  }
  Money cost(const Trip& trip) const { return cost(trip.from, trip.to, trip.start); }
  Money kappa(int delta) const { return exit_cost[delta]; }

  bool feasible(const Trip& trip) const;
  int arrival(const Trip& trip) const { return trip.start + distance(trip.from, trip.to); }

  int location_index(const std::string& name) const;

  // Sizes the cost tables and fills them with c = rate * dist and
  // kappa_delta = exit_rate * delta.
  void set_linear_costs(Money rate, Money exit_rate);

  bool operator==(const Economy&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_economy(const Economy& econ);

// Throws ModelError listing every violation when the economy is invalid.
void require_valid(const Economy& econ);

// All trips (a, b, t) with t + dist(a, b) <= T, ordered by (t, a, b).
std::vector<Trip> feasible_trips(const Economy& econ);

std::string trip_label(const Economy& econ, const Trip& trip);

}  // namespace stp
