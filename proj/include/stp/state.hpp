#pragma once

#include <string>
#include <vector>

#include "stp/economy.hpp"

namespace stp {

enum class Phase { NotEntered, Available, EnRoute, Gone };

// Dynamic state of one driver.
//   NotEntered: waiting to appear at (loc, start).
//   Available:  at loc at the current time; `entered` is false only for a
//               driver who has appeared but not yet committed to the platform.
//   EnRoute:    driving loc -> dest, having left at `start`, with `rider`
//               aboard (-1 when relocating).
//   Gone:       exited or never entered.
struct DriverState {
  Phase phase = Phase::Gone;
  int loc = 0;
  int dest = 0;
  int start = 0;
  int rider = -1;
  bool entered = false;

  static DriverState not_entered(const DriverType& type);
  static DriverState available(int loc, bool entered);
  static DriverState en_route(int from, int to, int start, int rider);
  static DriverState gone();

  bool operator==(const DriverState&) const = default;
};

struct PlatformState {
  int time = 0;
  std::vector<DriverState> drivers;

  bool operator==(const PlatformState&) const = default;
};

// What a driver does in one period. `Stay` is the only action of a driver who
// is en route, not yet entered, or gone. `Trip` with rider >= 0 carries that
// rider; with rider == -1 it is an empty relocation.
struct Action {
  enum class Kind { Stay, Trip, Exit };
  Kind kind = Kind::Stay;
  int dest = -1;
  int rider = -1;

  static Action stay() { return {}; }
  static Action trip(int dest, int rider = -1) { return {Kind::Trip, dest, rider}; }
  static Action exit() { return {Kind::Exit, -1, -1}; }

  bool operator==(const Action&) const = default;
};

using ActionProfile = std::vector<Action>;

std::string describe(const Economy& econ, const Action& action);
std::string describe(const Economy& econ, const DriverState& state);

PlatformState initial_state(const Economy& econ);

// Actions open to driver i at state.time. `dispatched` adds a rider trip
// when the mechanism has assigned one; every driver may relocate anywhere
// in reach or exit without the mechanism's consent.
std::vector<Action> available_actions(const Economy& econ, const PlatformState& state, int driver,
                                      const Action& dispatched);

bool is_legal(const Economy& econ, const PlatformState& state, int driver, const Action& action);

// Trip cost or exit cost the driver incurs by taking `action` this period.
Money action_cost(const Economy& econ, const PlatformState& state, int driver, const Action& action);

// Advances the platform one period. Throws ModelError naming the first
// driver whose action is illegal, or a rider claimed twice.
PlatformState apply_actions(const Economy& econ, const PlatformState& state,
                            const ActionProfile& actions);

struct ShiftedEconomy {
  Economy econ;
  int offset = 0;
  std::vector<int> driver_ids;  // shifted driver index -> original driver id
  std::vector<int> rider_ids;   // shifted rider index -> original rider id
};

// The remaining market seen from `state`: horizon T - t, riders from time t
// on, available drivers re-rooted at time 0, drivers en route appearing at
// their destination on arrival, departed drivers dropped. A driver whose
// current trip ends exactly at the horizon keeps an entry time equal to the
// new horizon; such a driver has no decision left.
ShiftedEconomy shift_economy(const Economy& econ, const PlatformState& state);

}  // namespace stp
