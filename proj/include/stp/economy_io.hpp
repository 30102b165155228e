#pragma once

#include <string>

#include "stp/economy.hpp"

namespace stp {

// Economy documents are JSON objects:
//
//   {
//     "horizon": 3,
//     "locations": ["A", "B", "C"],
//     "dist": [[1, 1, 2], [1, 1, 1], [2, 1, 1]],
//     "trip_cost": {"per_period": 10},
//     "exit_cost": {"per_period": 5},
//     "drivers": [{"entered": true, "location": "C", "time": 0}],
//     "riders": [{"origin": "C", "dest": "B", "time": 0, "value": 20}]
//   }
//
// "trip_cost" may instead be {"entries": [["A", "B", 0, 7], ...]} listing
// every feasible trip, and "exit_cost" may be an explicit array of
// horizon+1 integers. A driver may carry "exit_time", which must equal the
// horizon; a rider may carry "latest_time", which must equal "time". All
// money fields must be JSON integers.
Economy parse_economy(const std::string& text);
Economy load_economy(const std::string& path);

// Canonical serialization: fixed key order, two-space indent, linear cost
// schedules collapsed to "per_period" form when they are exactly linear.
std::string dump_economy(const Economy& econ);
void save_economy(const Economy& econ, const std::string& path);

}  // namespace stp
