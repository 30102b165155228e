#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "stp/economy.hpp"
#include "stp/plan.hpp"
#include "stp/state.hpp"

namespace stp {

// What the mechanism asks of one driver this period and what it pays if the
// driver complies. A rider on the dispatched trip is charged the same amount.
struct Dispatched {
  Action action;
  Money payment = 0;
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Mechanism> clone() const = 0;
  virtual void init(const Economy& econ, std::uint64_t seed) = 0;
  virtual std::vector<Dispatched> dispatch(const PlatformState& state) = 0;
  virtual void observe(const PlatformState& state, const ActionProfile& dispatched, const ActionProfile& taken) = 0;
  // Periods at which a fresh plan was computed (the initial plan excluded).
  virtual std::vector<int> replans() const { return {}; }
};

enum class ReplanPolicy { Never, OnDeviation, Always };

// Executes a priced CE plan computed on the current time-shifted economy.
// Pessimal + OnDeviation is the STP mechanism; Optimal + OnDeviation the
// driver-optimal mechanism; Never gives the static CE mechanisms; Pessimal +
// Always recomputes a fresh pessimal plan every period.
class PlanMechanism : public Mechanism {
 public:
  PlanMechanism(PlanKind kind, ReplanPolicy policy);

  std::string name() const override;
  std::unique_ptr<Mechanism> clone() const override { return std::make_unique<PlanMechanism>(*this); }
  void init(const Economy& econ, std::uint64_t seed) override;
  std::vector<Dispatched> dispatch(const PlatformState& state) override;
  void observe(const PlatformState& state, const ActionProfile& dispatched, const ActionProfile& taken) override;
  std::vector<int> replans() const override { return replans_; }

  // The plan in force and the shifted economy it was computed on.
  const Plan& current_plan() const { return plan_; }
  const ShiftedEconomy& current_economy() const { return shifted_; }

 private:
  void replan(const PlatformState& state);

  PlanKind kind_;
  ReplanPolicy policy_;
  Economy econ_;
  ShiftedEconomy shifted_;
  Plan plan_;
  std::vector<int> shifted_index_;  // original driver id -> index in shifted_, or -1
  bool deviated_ = false;
  std::vector<int> replans_;
};

// Per-location, per-period market clearing by per-period surplus. Drivers
// left idle pick a random location in reach and relocate there when that is
// no dearer than exiting, otherwise they exit.
class MyopicMechanism : public Mechanism {
 public:
  std::string name() const override { return "myopic"; }
  std::unique_ptr<Mechanism> clone() const override { return std::make_unique<MyopicMechanism>(*this); }
  void init(const Economy& econ, std::uint64_t seed) override;
  std::vector<Dispatched> dispatch(const PlatformState& state) override;
  void observe(const PlatformState&, const ActionProfile&, const ActionProfile&) override {}

  // Lowest clearing price of (a, b, t) at the last dispatched period.
  Money last_price(int a, int b) const { return last_prices_[a * econ_.num_locations() + b]; }

 private:
  Economy econ_;
  std::uint64_t seed_ = 0;
  std::vector<Money> last_prices_;
};

std::unique_ptr<Mechanism> stp_mechanism();
std::unique_ptr<Mechanism> driver_optimal_mechanism();
std::unique_ptr<Mechanism> static_ce_mechanism(PlanKind kind);
std::unique_ptr<Mechanism> naive_replan_mechanism();
std::unique_ptr<Mechanism> myopic_mechanism();

// Names accepted by make_mechanism: stp, myopic, static-pessimal,
// static-optimal, driver-optimal, naive-replan.
std::unique_ptr<Mechanism> make_mechanism(const std::string& name);
std::vector<std::string> mechanism_names();

// A driver's choice given their dispatched action and the legal actions.
using Strategy = std::function<Action(int driver, const PlatformState& state, const Action& dispatched,
                                      const std::vector<Action>& available)>;

Strategy straightforward();

struct Override {
  int driver = 0;
  int time = 0;
  Action action;
};
// Straightforward except for the listed (driver, time, action) overrides.
Strategy scripted(std::vector<Override> overrides);

struct StepRecord {
  int time = 0;
  int driver = 0;
  Action dispatched;
  Action taken;
  Money payment = 0;
  Money cost = 0;
};

struct RiderCharge {
  int time = 0;
  int rider = 0;
  int driver = 0;
  Money amount = 0;
};

struct Trace {
  std::string mechanism;
  std::vector<PlatformState> states;   // s_0 .. s_T
  std::vector<ActionProfile> actions;  // taken, per period
  std::vector<StepRecord> steps;       // one per available driver per period
  std::vector<RiderCharge> charges;
  std::vector<int> replans;
  std::vector<Money> utility;  // per driver: payments minus costs

  Money welfare(const Economy& econ) const;
};

Trace run_simulation(const Economy& econ, Mechanism& mech, const Strategy& strategy, std::uint64_t seed);

// Text form: a header, then "step", "charge" and "replan" records.
std::string dump_trace(const Economy& econ, const Trace& trace);

// Re-applies the recorded action profiles from s_0; true when every state
// matches the recorded one.
bool replay_matches(const Economy& econ, const Trace& trace);

// Largest gain driver `driver` can get from one off-dispatch action followed
// by straightforward play, all others straightforward; 0 when no deviation
// helps.
Money single_deviation_regret(const Economy& econ, const Mechanism& prototype, int driver, std::uint64_t seed);

// Same, for every driver at once (shares the straightforward run).
std::vector<Money> single_deviation_regrets(const Economy& econ, const Mechanism& prototype, std::uint64_t seed);

// Per-driver, per-period flow marginal externality along the welfare-optimal
// dispatch: others' welfare when the driver is present through t and absent
// afterwards, minus others' welfare when that driver is absent from t. Each driver's
// payments minus own costs sum to the welfare loss Psi.
std::vector<std::vector<Money>> dynamic_vcg_payments(const Economy& econ);

}  // namespace stp
