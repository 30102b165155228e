#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stp/economy.hpp"
#include "stp/flow.hpp"

namespace stp {

// Anonymous trip prices, one per feasible (a, b, t).
struct Prices {
  int num_locations = 0;
  int horizon = 0;
  std::vector<Money> table;  // indexed (t, a, b); zero for infeasible trips

  static Prices zeros(const Economy& econ);
  Money at(const Trip& trip) const {
    return table[(static_cast<std::size_t>(trip.start) * num_locations + trip.from) * num_locations + trip.to];
  }
  Money& at(const Trip& trip) {
    return table[(static_cast<std::size_t>(trip.start) * num_locations + trip.from) * num_locations + trip.to];
  }
};

// p(a, b, t) = max(0, phi(a, t) - phi(b, t + dist) + c(a, b, t)).
Prices prices_from_potentials(const Economy& econ, const Potentials& phi);

enum class PlanKind { Pessimal, Optimal };

struct Plan {
  Dispatch dispatch;
  Prices prices;
  Potentials potentials;
  std::vector<Money> driver_payment;  // prices of the rider trips driven
  std::vector<Money> driver_utility;  // payment minus path cost
  std::vector<Money> rider_payment;   // price paid when picked, else 0
};

// Fills in payments and utilities for a dispatch under the given prices.
Plan price_dispatch(const Economy& econ, Dispatch dispatch, Prices prices);

Plan make_plan(const Economy& econ, PlanKind kind, const SolveOptions& options = {});
Plan plan_driver_pessimal(const Economy& econ);
Plan plan_driver_optimal(const Economy& econ);

// Highest continuation payoff of an entered driver at (a, t) who is paid
// max(p, 0) on every trip the driver drives.
Money best_path_value(const Economy& econ, const Prices& prices, int a, int t);
// Same for a driver type; a driver who has not entered may stay out for 0.
Money best_driver_value(const Economy& econ, const Prices& prices, const DriverType& driver);

struct DriverViolation {
  int driver = 0;
  Money best = 0;
  Money plan = 0;
};

struct CEReport {
  std::vector<std::string> feasibility_violations;
  std::vector<int> rider_br_violations;
  std::vector<DriverViolation> driver_br_violations;
  std::vector<Trip> excess_supply_price_violations;
  std::vector<std::string> envy_violations;
  std::vector<std::string> ir_violations;
  Money budget_delta = 0;  // total rider payments minus total driver payments

  bool ok() const {
    return feasibility_violations.empty() && rider_br_violations.empty() && driver_br_violations.empty() &&
           excess_supply_price_violations.empty() && envy_violations.empty() && ir_violations.empty() &&
           budget_delta == 0;
  }
  std::string summary(const Economy& econ) const;
};

CEReport verify_ce(const Economy& econ, const Plan& plan);

struct Coalition {
  std::vector<int> drivers;
  std::vector<int> riders;
  Money utility = 0;  // what the plan gives the coalition
  Money welfare = 0;  // what the coalition could achieve alone
};

struct CoreReport {
  bool exhaustive = false;
  std::size_t checked = 0;
  std::vector<Coalition> blocking;

  bool ok() const { return blocking.empty(); }
};

// Checks every coalition when 2^(drivers + riders) <= 4096, otherwise
// n_samples coalitions drawn by including each agent with probability 1/2.
CoreReport check_core_sampled(const Economy& econ, const Plan& plan, std::size_t n_samples, std::uint64_t seed);

// Welfare of the sub-economy formed by a coalition.
Money coalition_welfare(const Economy& econ, const std::vector<int>& drivers, const std::vector<int>& riders);

struct RiderVcg {
  bool defined = false;      // rider is served in some welfare-optimal dispatch
  Money price = 0;           // omega(R \ j) - (omega(R) - v_j)
  Money pessimal_price = 0;  // driver-pessimal price of the rider's trip
  bool picked_in_reduced = false;   // served when the rider's value is lowered to `price`
  Money reduced_price = 0;          // pessimal price in that economy
  bool reduced_plan_is_ce = false;  // that plan is a CE of the original economy
  bool minimum_price_holds() const {
    return defined && picked_in_reduced && reduced_price <= price && pessimal_price >= price && reduced_plan_is_ce;
  }
};

RiderVcg rider_vcg_price(const Economy& econ, int rider);

Economy without_rider(const Economy& econ, int rider);
Economy without_driver(const Economy& econ, int driver);

// Plan dump: one line per driver action path, then the price table.
std::string dump_plan(const Economy& econ, const Plan& plan);

}  // namespace stp
