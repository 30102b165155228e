#include "stp/plan.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace stp {

Prices Prices::zeros(const Economy& econ) {
  Prices p;
  p.num_locations = econ.num_locations();
  p.horizon = econ.horizon;
  p.table.assign(static_cast<std::size_t>(econ.horizon) * p.num_locations * p.num_locations, 0);
  return p;
}

Prices prices_from_potentials(const Economy& econ, const Potentials& phi) {
  Prices p = Prices::zeros(econ);
  for (const auto& trip : feasible_trips(econ)) {
    const Money raw = phi.at(trip.from, trip.start) - phi.at(trip.to, econ.arrival(trip)) + econ.cost(trip);
    p.at(trip) = std::max<Money>(raw, 0);
  }
  return p;
}

Plan price_dispatch(const Economy& econ, Dispatch dispatch, Prices prices) {
  Plan plan;
  plan.dispatch = std::move(dispatch);
  plan.prices = std::move(prices);
  plan.driver_payment.assign(econ.drivers.size(), 0);
  plan.driver_utility.assign(econ.drivers.size(), 0);
  plan.rider_payment.assign(econ.riders.size(), 0);
  for (int i = 0; i < econ.num_drivers(); ++i) {
    const auto& path = plan.dispatch.paths[i];
    Money pay = 0;
    for (const auto& leg : path.legs)
      if (leg.rider >= 0) pay += plan.prices.at(leg.trip);
    plan.driver_payment[i] = pay;
    plan.driver_utility[i] = pay - path_cost(econ, econ.drivers[i], path.path());
  }
  for (int j = 0; j < econ.num_riders(); ++j)
    if (plan.dispatch.picked[j]) plan.rider_payment[j] = plan.prices.at(econ.riders[j].trip());
  return plan;
}

Plan make_plan(const Economy& econ, PlanKind kind, const SolveOptions& options) {
  const FlowNetwork net = build_network(econ);
  const OptimalFlow flow = solve_min_cost_flow(net, options);
  Dispatch dispatch = decompose_flow(net, flow, econ);
  Potentials phi = kind == PlanKind::Pessimal ? potentials_pessimal(net, flow) : potentials_optimal(net, flow);
  Prices prices = prices_from_potentials(econ, phi);
  Plan plan = price_dispatch(econ, std::move(dispatch), std::move(prices));
  plan.potentials = std::move(phi);
  return plan;
}

Plan plan_driver_pessimal(const Economy& econ) { return make_plan(econ, PlanKind::Pessimal); }
Plan plan_driver_optimal(const Economy& econ) { return make_plan(econ, PlanKind::Optimal); }

namespace {

// value[t][a] for every node, by backward induction.
std::vector<std::vector<Money>> continuation_values(const Economy& econ, const Prices& prices) {
  const int n = econ.num_locations();
  const int T = econ.horizon;
  std::vector<std::vector<Money>> v(T + 1, std::vector<Money>(n, 0));
  for (int t = T; t >= 0; --t) {
    for (int a = 0; a < n; ++a) {
      Money best = -econ.kappa(T - t);
      for (int b = 0; b < n; ++b) {
        const Trip trip{a, b, t};
        if (t >= T || !econ.feasible(trip)) continue;
        best = std::max(best, std::max<Money>(prices.at(trip), 0) - econ.cost(trip) + v[econ.arrival(trip)][b]);
      }
      v[t][a] = best;
    }
  }
  return v;
}

}  // namespace

Money best_path_value(const Economy& econ, const Prices& prices, int a, int t) {
  return continuation_values(econ, prices)[t][a];
}

Money best_driver_value(const Economy& econ, const Prices& prices, const DriverType& driver) {
  const Money v = best_path_value(econ, prices, driver.loc, driver.time);
  return driver.entered ? v : std::max<Money>(v, 0);
}

CEReport verify_ce(const Economy& econ, const Plan& plan) {
  CEReport report;
  const auto& picked = plan.dispatch.picked;

  std::vector<int> carried(econ.riders.size(), 0);
  std::map<Trip, std::pair<int, int>> usage;  // trip -> (drivers on it, riders carried on it)
  for (int i = 0; i < econ.num_drivers(); ++i) {
    const auto& path = plan.dispatch.paths[i];
    try {
      check_path(econ, econ.drivers[i], path.path());
    } catch (const ModelError& e) {
      report.feasibility_violations.push_back("driver " + std::to_string(i) + ": " + e.what());
      continue;
    }
    for (const auto& leg : path.legs) {
      auto& u = usage[leg.trip];
      ++u.first;
      if (leg.rider < 0) continue;
      ++u.second;
      ++carried[leg.rider];
      if (econ.riders[leg.rider].trip() != leg.trip)
        report.feasibility_violations.push_back("rider " + std::to_string(leg.rider) + " carried on the wrong trip");
    }
  }
  for (int j = 0; j < econ.num_riders(); ++j) {
    if (carried[j] > 1) report.feasibility_violations.push_back("rider " + std::to_string(j) + " carried twice");
    if ((carried[j] > 0) != (picked[j] != 0))
      report.feasibility_violations.push_back("rider " + std::to_string(j) + " pick-up flag disagrees with paths");
  }

  for (int j = 0; j < econ.num_riders(); ++j) {
    const Money p = plan.prices.at(econ.riders[j].trip());
    const Money v = econ.riders[j].value;
    if ((v > p && !picked[j]) || (picked[j] && v < p)) report.rider_br_violations.push_back(j);
  }

  const auto values = continuation_values(econ, plan.prices);
  for (int i = 0; i < econ.num_drivers(); ++i) {
    const auto& d = econ.drivers[i];
    Money best = values[d.time][d.loc];
    if (!d.entered) best = std::max<Money>(best, 0);
    if (best != plan.driver_utility[i]) report.driver_br_violations.push_back({i, best, plan.driver_utility[i]});
    if (!d.entered && plan.driver_utility[i] < 0)
      report.ir_violations.push_back("driver " + std::to_string(i) + " has negative utility");
  }

  for (const auto& [trip, u] : usage)
    if (u.first > u.second && plan.prices.at(trip) > 0) report.excess_supply_price_violations.push_back(trip);

  for (int i = 0; i < econ.num_drivers(); ++i)
    for (int k = i + 1; k < econ.num_drivers(); ++k)
      if (econ.drivers[i] == econ.drivers[k] && plan.driver_utility[i] != plan.driver_utility[k])
        report.envy_violations.push_back("drivers " + std::to_string(i) + " and " + std::to_string(k) +
                                         " share a type but earn different utilities");
  for (int j = 0; j < econ.num_riders(); ++j) {
    if (picked[j]) continue;
    for (int k = 0; k < econ.num_riders(); ++k) {
      if (picked[k] && econ.riders[k].trip() == econ.riders[j].trip() &&
          econ.riders[j].value > plan.rider_payment[k]) {
        report.envy_violations.push_back("rider " + std::to_string(j) + " envies rider " + std::to_string(k));
        break;
      }
    }
  }
  for (int j = 0; j < econ.num_riders(); ++j)
    if (picked[j] && plan.rider_payment[j] > econ.riders[j].value)
      report.ir_violations.push_back("rider " + std::to_string(j) + " pays more than their value");

  Money riders_paid = 0;
  Money drivers_paid = 0;
  for (Money p : plan.rider_payment) riders_paid += p;
  for (Money p : plan.driver_payment) drivers_paid += p;
  report.budget_delta = riders_paid - drivers_paid;
  return report;
}

std::string CEReport::summary(const Economy& econ) const {
  std::ostringstream os;
  if (ok()) {
    os << "CE: ok\n";
    return os.str();
  }
  os << "CE: violated\n";
  for (const auto& s : feasibility_violations) os << "  infeasible: " << s << "\n";
  for (int j : rider_br_violations) os << "  rider best response fails for rider " << j << "\n";
  for (const auto& d : driver_br_violations)
    os << "  driver " << d.driver << " can earn " << d.best << " instead of " << d.plan << "\n";
  for (const auto& t : excess_supply_price_violations)
    os << "  positive price on oversupplied trip " << trip_label(econ, t) << "\n";
  for (const auto& s : envy_violations) os << "  envy: " << s << "\n";
  for (const auto& s : ir_violations) os << "  individual rationality: " << s << "\n";
  if (budget_delta != 0) os << "  budget imbalance " << budget_delta << "\n";
  return os.str();
}

Economy without_rider(const Economy& econ, int rider) {
  Economy e = econ;
  e.riders.erase(e.riders.begin() + rider);
  return e;
}

Economy without_driver(const Economy& econ, int driver) {
  Economy e = econ;
  e.drivers.erase(e.drivers.begin() + driver);
  return e;
}

Money coalition_welfare(const Economy& econ, const std::vector<int>& drivers, const std::vector<int>& riders) {
  if (drivers.empty()) return 0;
  Economy sub = econ;
  sub.drivers.clear();
  sub.riders.clear();
  for (int i : drivers) sub.drivers.push_back(econ.drivers[i]);
  for (int j : riders) sub.riders.push_back(econ.riders[j]);
  return omega(sub);
}

CoreReport check_core_sampled(const Economy& econ, const Plan& plan, std::size_t n_samples, std::uint64_t seed) {
  CoreReport report;
  const int nd = econ.num_drivers();
  const int nr = econ.num_riders();
  const int agents = nd + nr;
  auto test = [&](const std::vector<char>& in) {
    Coalition c;
    for (int i = 0; i < nd; ++i)
      if (in[i]) {
        c.drivers.push_back(i);
        c.utility += plan.driver_utility[i];
      }
    for (int j = 0; j < nr; ++j)
      if (in[nd + j]) {
        c.riders.push_back(j);
        if (plan.dispatch.picked[j]) c.utility += econ.riders[j].value - plan.rider_payment[j];
      }
    c.welfare = coalition_welfare(econ, c.drivers, c.riders);
    ++report.checked;
    if (c.utility < c.welfare) report.blocking.push_back(std::move(c));
  };
  std::vector<char> in(agents, 0);
  if (agents <= 12) {
    report.exhaustive = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << agents); ++mask) {
      for (int k = 0; k < agents; ++k) in[k] = static_cast<char>((mask >> k) & 1U);
      test(in);
    }
    return report;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (int k = 0; k < agents; ++k) in[k] = static_cast<char>(rng() & 1U);
    test(in);
  }
  return report;
}

RiderVcg rider_vcg_price(const Economy& econ, int rider) {
  RiderVcg out;
  const Plan base = make_plan(econ, PlanKind::Pessimal, SolveOptions{rider});
  out.pessimal_price = base.prices.at(econ.riders[rider].trip());
  if (!base.dispatch.picked[rider]) return out;
  out.defined = true;
  const Money v = econ.riders[rider].value;
  out.price = omega(without_rider(econ, rider)) - (base.dispatch.welfare - v);

  Economy reduced = econ;
  reduced.riders[rider].value = out.price;
  const Plan alt = make_plan(reduced, PlanKind::Pessimal, SolveOptions{rider});
  out.picked_in_reduced = alt.dispatch.picked[rider] != 0;
  out.reduced_price = alt.prices.at(econ.riders[rider].trip());
  const Plan transplanted = price_dispatch(econ, alt.dispatch, alt.prices);
  out.reduced_plan_is_ce = verify_ce(econ, transplanted).ok();
  return out;
}

std::string dump_plan(const Economy& econ, const Plan& plan) {
  std::ostringstream os;
  os << "# driver utility payment path\n";
  for (int i = 0; i < econ.num_drivers(); ++i) {
    os << "driver " << i << " utility " << plan.driver_utility[i] << " payment " << plan.driver_payment[i] << " :";
    const auto& legs = plan.dispatch.paths[i].legs;
    if (legs.empty()) os << (econ.drivers[i].entered ? " exit" : " stay-out");
    for (const auto& leg : legs) {
      os << ' ' << trip_label(econ, leg.trip);
      if (leg.rider >= 0) os << "[r" << leg.rider << ']';
    }
    os << '\n';
  }
  os << "# trip price riders-requesting riders-served\n";
  for (const auto& trip : feasible_trips(econ)) {
    int want = 0;
    int served = 0;
    for (int j = 0; j < econ.num_riders(); ++j) {
      if (econ.riders[j].trip() != trip) continue;
      ++want;
      served += plan.dispatch.picked[j];
    }
    if (want == 0) continue;
    os << "price " << trip_label(econ, trip) << ' ' << plan.prices.at(trip) << ' ' << want << ' ' << served << '\n';
  }
  os << "welfare " << plan.dispatch.welfare << '\n';
  return os.str();
}

}  // namespace stp
