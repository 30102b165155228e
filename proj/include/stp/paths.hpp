#pragma once

#include <cstddef>
#include <vector>

#include "stp/economy.hpp"

namespace stp {

// A chain of trips starting at the driver's entry node. The path ends where
// its last trip arrives; ending before the horizon means exiting early. The
// empty path means "never enter" for a driver who has not entered yet and
// "exit immediately" for one who has.
struct Path {
  std::vector<Trip> trips;

  auto operator<=>(const Path&) const = default;
};

// One leg of an action path: a trip and the rider carried on it (-1 when
// the driver relocates empty).
struct Leg {
  Trip trip;
  int rider = -1;

  auto operator<=>(const Leg&) const = default;
};

struct ActionPath {
  std::vector<Leg> legs;

  Path path() const;
  auto operator<=>(const ActionPath&) const = default;
};

// Throws ModelError when the path does not chain from the driver's entry
// node or leaves the horizon.
void check_path(const Economy& econ, const DriverType& driver, const Path& path);

// Time at which the driver leaves the platform along this path.
int path_end_time(const Economy& econ, const DriverType& driver, const Path& path);

Money path_cost(const Economy& econ, const DriverType& driver, const Path& path);

// Exhaustive list including the empty path. Throws ModelError once more
// than `cap` paths have been produced.
std::vector<Path> enumerate_feasible_paths(const Economy& econ, const DriverType& driver,
                                           std::size_t cap = 1'000'000);

}  // namespace stp
