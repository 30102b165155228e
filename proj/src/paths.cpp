#include "stp/paths.hpp"

#include <string>

namespace stp {

Path ActionPath::path() const {
  Path p;
  for (const auto& leg : legs) p.trips.push_back(leg.trip);
  return p;
}

void check_path(const Economy& econ, const DriverType& driver, const Path& path) {
  int at = driver.loc;
  int t = driver.time;
  for (const auto& trip : path.trips) {
    if (trip.from != at || trip.start != t)
      throw ModelError("path does not chain at " + trip_label(econ, trip));
    if (!econ.feasible(trip)) throw ModelError("path trip " + trip_label(econ, trip) + " is infeasible");
    at = trip.to;
    t = econ.arrival(trip);
  }
}

int path_end_time(const Economy& econ, const DriverType& driver, const Path& path) {
  if (path.trips.empty()) return driver.time;
  return econ.arrival(path.trips.back());
}

Money path_cost(const Economy& econ, const DriverType& driver, const Path& path) {
  check_path(econ, driver, path);
  if (path.trips.empty()) return driver.entered ? econ.kappa(econ.horizon - driver.time) : 0;
  Money total = 0;
  for (const auto& trip : path.trips) total += econ.cost(trip);
  return total + econ.kappa(econ.horizon - path_end_time(econ, driver, path));
}

namespace {

void extend(const Economy& econ, Path& prefix, int at, int t, std::size_t cap, std::vector<Path>& out) {
  for (int b = 0; b < econ.num_locations(); ++b) {
    const Trip trip{at, b, t};
    if (!econ.feasible(trip)) continue;
    prefix.trips.push_back(trip);
    if (out.size() >= cap)
      throw ModelError("path enumeration exceeded the cap of " + std::to_string(cap));
    out.push_back(prefix);
    extend(econ, prefix, b, econ.arrival(trip), cap, out);
    prefix.trips.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_feasible_paths(const Economy& econ, const DriverType& driver,
                                           std::size_t cap) {
  std::vector<Path> out;
  out.push_back(Path{});
  Path prefix;
  extend(econ, prefix, driver.loc, driver.time, cap, out);
  return out;
}

}  // namespace stp
