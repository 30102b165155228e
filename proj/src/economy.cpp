#include "stp/economy.hpp"

#include <sstream>

namespace stp {

bool Economy::feasible(const Trip& trip) const {
  const int n = num_locations();
  if (trip.from < 0 || trip.from >= n || trip.to < 0 || trip.to >= n) return false;
  if (trip.start < 0) return false;
  return trip.start + distance(trip.from, trip.to) <= horizon;
}

int Economy::location_index(const std::string& name) const {
  for (int i = 0; i < num_locations(); ++i) {
    if (locations[i] == name) return i;
  }
  throw ModelError("unknown location '" + name + "'");
}

void Economy::set_linear_costs(Money rate, Money exit_rate) {
  const int n = num_locations();
  trip_cost.assign(static_cast<std::size_t>(horizon) * n * n, 0);
  for (int t = 0; t < horizon; ++t)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        trip_cost[(static_cast<std::size_t>(t) * n + a) * n + b] = rate * dist[a][b];
  exit_cost.resize(horizon + 1);
  for (int d = 0; d <= horizon; ++d) exit_cost[d] = exit_rate * d;
}

ValidationReport validate_economy(const Economy& econ) {
  ValidationReport report;
  auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };
  const int n = econ.num_locations();
  const int T = econ.horizon;

  if (T < 1) fail("horizon must be at least 1");
  if (n < 1) fail("at least one location is required");
  if (static_cast<int>(econ.dist.size()) != n) {
    fail("distance matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    return report;
  }
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(econ.dist[a].size()) != n) {
      fail("distance matrix row " + econ.locations[a] + " has wrong length");
      return report;
    }
    for (int b = 0; b < n; ++b) {
      const int d = econ.dist[a][b];
      if (a == b && d != 1) {
        fail("self-distance must be 1 at " + econ.locations[a]);
      } else if (d < 1) {
        fail("distance " + econ.locations[a] + "->" + econ.locations[b] + " must be at least 1");
      }
    }
  }
  if (T < 1 || !report.ok()) return report;

  if (econ.trip_cost.size() != static_cast<std::size_t>(T) * n * n) {
    fail("trip cost table has wrong size");
  } else {
    for (Money c : econ.trip_cost) {
      if (c < 0) {
        fail("trip costs must be nonnegative");
        break;
      }
    }
  }
  if (static_cast<int>(econ.exit_cost.size()) != T + 1) {
    fail("exit cost schedule must have horizon+1 entries");
  } else {
    if (econ.exit_cost[0] != 0) fail("exit cost at delta 0 must be 0");
    for (Money k : econ.exit_cost) {
      if (k < 0) {
        fail("exit costs must be nonnegative");
        break;
      }
    }
  }

  for (int i = 0; i < econ.num_drivers(); ++i) {
    const auto& d = econ.drivers[i];
    if (d.loc < 0 || d.loc >= n) fail("driver " + std::to_string(i) + " has unknown location");
    // An entered driver may appear exactly at the horizon: that is how a
    // driver still en route at the end of a shifted market is represented.
    const bool ok_time = d.time >= 0 && (d.time < T || (d.entered && d.time == T));
    if (!ok_time) fail("driver " + std::to_string(i) + " entry time must lie in [0, horizon)");
  }
  for (int j = 0; j < econ.num_riders(); ++j) {
    const auto& r = econ.riders[j];
    if (r.origin < 0 || r.origin >= n || r.dest < 0 || r.dest >= n) {
      fail("rider " + std::to_string(j) + " has unknown location");
      continue;
    }
    if (!econ.feasible(r.trip())) fail("infeasible rider trip for rider " + std::to_string(j));
    if (r.value < 0) fail("rider " + std::to_string(j) + " has negative value");
  }
  return report;
}

void require_valid(const Economy& econ) {
  const auto report = validate_economy(econ);
  if (report.ok()) return;
  std::ostringstream os;
  os << "invalid economy:";
  for (const auto& v : report.violations) os << "\n  " << v;
  throw ModelError(os.str());
}

std::vector<Trip> feasible_trips(const Economy& econ) {
  std::vector<Trip> out;
  const int n = econ.num_locations();
  for (int t = 0; t < econ.horizon; ++t)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (t + econ.distance(a, b) <= econ.horizon) out.push_back({a, b, t});
  return out;
}

std::string trip_label(const Economy& econ, const Trip& trip) {
  return "(" + econ.locations[trip.from] + "," + econ.locations[trip.to] + "," +
         std::to_string(trip.start) + ")";
}

}  // namespace stp
