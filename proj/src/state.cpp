#include "stp/state.hpp"

namespace stp {

DriverState DriverState::not_entered(const DriverType& type) {
  DriverState s;
  s.phase = Phase::NotEntered;
  s.loc = type.loc;
  s.start = type.time;
  s.entered = type.entered;
  return s;
}

DriverState DriverState::available(int loc, bool entered) {
  DriverState s;
  s.phase = Phase::Available;
  s.loc = loc;
  s.entered = entered;
  return s;
}

DriverState DriverState::en_route(int from, int to, int start, int rider) {
  DriverState s;
  s.phase = Phase::EnRoute;
  s.loc = from;
  s.dest = to;
  s.start = start;
  s.rider = rider;
  s.entered = true;
  return s;
}

DriverState DriverState::gone() { return DriverState{}; }

std::string describe(const Economy& econ, const Action& action) {
  switch (action.kind) {
    case Action::Kind::Stay:
      return "-";
    case Action::Kind::Exit:
      return "exit";
    case Action::Kind::Trip:
      return "to " + econ.locations[action.dest] +
             (action.rider >= 0 ? " with r" + std::to_string(action.rider) : std::string{});
  }
  return "?";
}

std::string describe(const Economy& econ, const DriverState& s) {
  switch (s.phase) {
    case Phase::NotEntered:
      return "not-entered(" + econ.locations[s.loc] + "," + std::to_string(s.start) + ")";
    case Phase::Available:
      return std::string(s.entered ? "available(" : "available-unentered(") + econ.locations[s.loc] + ")";
    case Phase::EnRoute:
      return "en-route(" + econ.locations[s.loc] + "," + econ.locations[s.dest] + "," +
             std::to_string(s.start) + (s.rider >= 0 ? ",r" + std::to_string(s.rider) : std::string{}) + ")";
    case Phase::Gone:
      return "gone";
  }
  return "?";
}

PlatformState initial_state(const Economy& econ) {
  PlatformState state;
  state.time = 0;
  for (const auto& d : econ.drivers)
    state.drivers.push_back(d.time == 0 ? DriverState::available(d.loc, d.entered)
                                        : DriverState::not_entered(d));
  return state;
}

bool is_legal(const Economy& econ, const PlatformState& state, int driver, const Action& action) {
  const auto& s = state.drivers.at(driver);
  const int t = state.time;
  if (s.phase != Phase::Available) return action.kind == Action::Kind::Stay;
  switch (action.kind) {
    case Action::Kind::Stay:
      return false;
    case Action::Kind::Exit:
      return true;
    case Action::Kind::Trip: {
      const Trip trip{s.loc, action.dest, t};
      if (!econ.feasible(trip)) return false;
      if (action.rider < 0) return true;
      if (action.rider >= econ.num_riders()) return false;
      return econ.riders[action.rider].trip() == trip;
    }
  }
  return false;
}

std::vector<Action> available_actions(const Economy& econ, const PlatformState& state, int driver,
                                      const Action& dispatched) {
  const auto& s = state.drivers.at(driver);
  if (s.phase != Phase::Available) return {Action::stay()};
  std::vector<Action> out;
  for (int b = 0; b < econ.num_locations(); ++b) {
    if (!econ.feasible({s.loc, b, state.time})) continue;
    if (dispatched.kind == Action::Kind::Trip && dispatched.dest == b && dispatched.rider >= 0)
      out.push_back(dispatched);
    out.push_back(Action::trip(b));
  }
  out.push_back(Action::exit());
  return out;
}

Money action_cost(const Economy& econ, const PlatformState& state, int driver, const Action& action) {
  const auto& s = state.drivers.at(driver);
  if (s.phase != Phase::Available) return 0;
  if (action.kind == Action::Kind::Trip) return econ.cost(s.loc, action.dest, state.time);
  if (action.kind == Action::Kind::Exit && s.entered) return econ.kappa(econ.horizon - state.time);
  return 0;
}

PlatformState apply_actions(const Economy& econ, const PlatformState& state,
                            const ActionProfile& actions) {
  if (actions.size() != state.drivers.size())
    throw ModelError("action profile has " + std::to_string(actions.size()) + " entries for " +
                     std::to_string(state.drivers.size()) + " drivers");
  if (state.time >= econ.horizon) throw ModelError("no actions remain at the horizon");
  const int t = state.time;
  PlatformState next;
  next.time = t + 1;
  next.drivers.reserve(state.drivers.size());
  std::vector<char> claimed(econ.riders.size(), 0);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& s = state.drivers[i];
    const auto& a = actions[i];
    if (!is_legal(econ, state, static_cast<int>(i), a))
      throw ModelError("illegal action '" + describe(econ, a) + "' for driver " + std::to_string(i) +
                       " in state " + describe(econ, s) + " at t=" + std::to_string(t));
    if (a.rider >= 0) {
      if (claimed[a.rider]) throw ModelError("rider " + std::to_string(a.rider) + " claimed twice");
      claimed[a.rider] = 1;
    }
    switch (s.phase) {
      case Phase::NotEntered: {
        DriverType type{s.entered, s.loc, s.start};
        next.drivers.push_back(s.start == t + 1 ? DriverState::available(s.loc, s.entered)
                                                : DriverState::not_entered(type));
        break;
      }
      case Phase::EnRoute:
        next.drivers.push_back(s.start + econ.distance(s.loc, s.dest) == t + 1
                                   ? DriverState::available(s.dest, true)
                                   : s);
        break;
      case Phase::Gone:
        next.drivers.push_back(s);
        break;
      case Phase::Available:
        if (a.kind == Action::Kind::Exit) {
          next.drivers.push_back(DriverState::gone());
        } else if (t + econ.distance(s.loc, a.dest) == t + 1) {
          next.drivers.push_back(DriverState::available(a.dest, true));
        } else {
          next.drivers.push_back(DriverState::en_route(s.loc, a.dest, t, a.rider));
        }
        break;
    }
  }
  return next;
}

ShiftedEconomy shift_economy(const Economy& econ, const PlatformState& state) {
  const int t = state.time;
  if (t < 0 || t > econ.horizon) throw ModelError("state time outside the horizon");
  ShiftedEconomy out;
  out.offset = t;
  Economy& e = out.econ;
  e.horizon = econ.horizon - t;
  e.locations = econ.locations;
  e.dist = econ.dist;
  const std::size_t n = econ.locations.size();
  e.trip_cost.assign(econ.trip_cost.begin() + static_cast<std::ptrdiff_t>(t * n * n), econ.trip_cost.end());
  e.exit_cost.assign(econ.exit_cost.begin(), econ.exit_cost.begin() + e.horizon + 1);
  for (std::size_t i = 0; i < state.drivers.size(); ++i) {
    const auto& s = state.drivers[i];
    switch (s.phase) {
      case Phase::Gone:
        continue;
      case Phase::NotEntered:
        e.drivers.push_back({s.entered, s.loc, s.start - t});
        break;
      case Phase::Available:
        e.drivers.push_back({s.entered, s.loc, 0});
        break;
      case Phase::EnRoute:
        e.drivers.push_back({true, s.dest, s.start + econ.distance(s.loc, s.dest) - t});
        break;
    }
    out.driver_ids.push_back(static_cast<int>(i));
  }
  for (int j = 0; j < econ.num_riders(); ++j) {
    const auto& r = econ.riders[j];
    if (r.time < t) continue;
    e.riders.push_back({r.origin, r.dest, r.time - t, r.value});
    out.rider_ids.push_back(j);
  }
  return out;
}

}  // namespace stp
