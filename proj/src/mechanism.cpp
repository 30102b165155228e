#include "stp/mechanism.hpp"

#include <algorithm>
#include <sstream>

namespace stp {

PlanMechanism::PlanMechanism(PlanKind kind, ReplanPolicy policy) : kind_(kind), policy_(policy) {}

std::string PlanMechanism::name() const {
  if (policy_ == ReplanPolicy::Never) return kind_ == PlanKind::Pessimal ? "static-pessimal" : "static-optimal";
  if (policy_ == ReplanPolicy::Always) return kind_ == PlanKind::Pessimal ? "naive-replan" : "naive-replan-optimal";
  return kind_ == PlanKind::Pessimal ? "stp" : "driver-optimal";
}

void PlanMechanism::init(const Economy& econ, std::uint64_t) {
  econ_ = econ;
  deviated_ = false;
  replans_.clear();
  replan(initial_state(econ));
}

void PlanMechanism::replan(const PlatformState& state) {
  shifted_ = shift_economy(econ_, state);
  plan_ = make_plan(shifted_.econ, kind_);
  shifted_index_.assign(econ_.drivers.size(), -1);
  for (std::size_t k = 0; k < shifted_.driver_ids.size(); ++k) shifted_index_[shifted_.driver_ids[k]] = static_cast<int>(k);
  if (state.time > 0) replans_.push_back(state.time);
}

std::vector<Dispatched> PlanMechanism::dispatch(const PlatformState& state) {
  if (state.time > shifted_.offset &&
      ((policy_ == ReplanPolicy::OnDeviation && deviated_) || policy_ == ReplanPolicy::Always))
    replan(state);
  deviated_ = false;

  const int rel = state.time - shifted_.offset;
  std::vector<Dispatched> out(state.drivers.size());
  for (std::size_t i = 0; i < state.drivers.size(); ++i) {
    const auto& s = state.drivers[i];
    if (s.phase != Phase::Available) continue;
    out[i].action = Action::exit();
    const int k = shifted_index_[i];
    if (k < 0) continue;
    for (const auto& leg : plan_.dispatch.paths[k].legs) {
      if (leg.trip.start != rel) continue;
      if (leg.trip.from != s.loc) break;
      const int rider = leg.rider >= 0 ? shifted_.rider_ids[leg.rider] : -1;
      out[i].action = Action::trip(leg.trip.to, rider);
      out[i].payment = rider >= 0 ? plan_.prices.at(leg.trip) : 0;
      break;
    }
  }
  return out;
}

void PlanMechanism::observe(const PlatformState&, const ActionProfile& dispatched, const ActionProfile& taken) {
  if (dispatched != taken) deviated_ = true;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void MyopicMechanism::init(const Economy& econ, std::uint64_t seed) {
  econ_ = econ;
  seed_ = seed;
  last_prices_.assign(static_cast<std::size_t>(econ.num_locations()) * econ.num_locations(), 0);
}

std::vector<Dispatched> MyopicMechanism::dispatch(const PlatformState& state) {
  const int t = state.time;
  const int n = econ_.num_locations();
  std::vector<Dispatched> out(state.drivers.size());
  std::fill(last_prices_.begin(), last_prices_.end(), 0);

  for (int a = 0; a < n; ++a) {
    std::vector<int> drivers;
    for (std::size_t i = 0; i < state.drivers.size(); ++i)
      if (state.drivers[i].phase == Phase::Available && state.drivers[i].loc == a) drivers.push_back(static_cast<int>(i));

    // Riders with nonnegative surplus rate, best rate first.
    std::vector<int> riders;
    for (int j = 0; j < econ_.num_riders(); ++j) {
      const auto& r = econ_.riders[j];
      if (r.time == t && r.origin == a && r.value >= econ_.cost(r.trip())) riders.push_back(j);
    }
    auto surplus = [&](int j) { return econ_.riders[j].value - econ_.cost(econ_.riders[j].trip()); };
    auto length = [&](int j) { return static_cast<Money>(econ_.distance(econ_.riders[j].origin, econ_.riders[j].dest)); };
    std::stable_sort(riders.begin(), riders.end(),
                     [&](int x, int y) { return surplus(x) * length(y) > surplus(y) * length(x); });

    const std::size_t served = std::min(drivers.size(), riders.size());
    Money rate_num = 0;
    Money rate_den = 1;
    if (served < riders.size()) {
      rate_num = surplus(riders[served]);
      rate_den = length(riders[served]);
    }
    for (int b = 0; b < n; ++b) {
      if (!econ_.feasible({a, b, t})) continue;
      last_prices_[a * n + b] = rate_num * econ_.distance(a, b) / rate_den + econ_.cost(a, b, t);
    }

    for (std::size_t k = 0; k < drivers.size(); ++k) {
      const int i = drivers[k];
      if (k < served) {
        const auto& r = econ_.riders[riders[k]];
        out[i] = {Action::trip(r.dest, riders[k]), last_prices_[a * n + r.dest]};
        continue;
      }
      std::vector<int> reach;
      for (int b = 0; b < n; ++b)
        if (econ_.feasible({a, b, t})) reach.push_back(b);
      const std::uint64_t h = mix(seed_ ^ mix(static_cast<std::uint64_t>(t) * 1000003ULL + static_cast<std::uint64_t>(i)));
      const int b = reach[h % reach.size()];
      const Money exit_cost = state.drivers[i].entered ? econ_.kappa(econ_.horizon - t) : 0;
      out[i].action = econ_.cost(a, b, t) <= exit_cost ? Action::trip(b) : Action::exit();
    }
  }
  return out;
}

std::unique_ptr<Mechanism> stp_mechanism() {
  return std::make_unique<PlanMechanism>(PlanKind::Pessimal, ReplanPolicy::OnDeviation);
}
std::unique_ptr<Mechanism> driver_optimal_mechanism() {
  return std::make_unique<PlanMechanism>(PlanKind::Optimal, ReplanPolicy::OnDeviation);
}
std::unique_ptr<Mechanism> static_ce_mechanism(PlanKind kind) {
  return std::make_unique<PlanMechanism>(kind, ReplanPolicy::Never);
}
std::unique_ptr<Mechanism> naive_replan_mechanism() {
  return std::make_unique<PlanMechanism>(PlanKind::Pessimal, ReplanPolicy::Always);
}
std::unique_ptr<Mechanism> myopic_mechanism() { return std::make_unique<MyopicMechanism>(); }

std::vector<std::string> mechanism_names() {
  return {"stp", "myopic", "static-pessimal", "static-optimal", "driver-optimal", "naive-replan"};
}

std::unique_ptr<Mechanism> make_mechanism(const std::string& name) {
  if (name == "stp") return stp_mechanism();
  if (name == "myopic") return myopic_mechanism();
  if (name == "static-pessimal") return static_ce_mechanism(PlanKind::Pessimal);
  if (name == "static-optimal") return static_ce_mechanism(PlanKind::Optimal);
  if (name == "driver-optimal") return driver_optimal_mechanism();
  if (name == "naive-replan") return naive_replan_mechanism();
  throw ModelError("unknown mechanism '" + name + "'");
}

Strategy straightforward() {
  return [](int, const PlatformState&, const Action& dispatched, const std::vector<Action>&) { return dispatched; };
}

Strategy scripted(std::vector<Override> overrides) {
  return [overrides = std::move(overrides)](int driver, const PlatformState& state, const Action& dispatched,
                                            const std::vector<Action>&) {
    for (const auto& o : overrides)
      if (o.driver == driver && o.time == state.time) return o.action;
    return dispatched;
  };
}

Money Trace::welfare(const Economy& econ) const {
  Money w = 0;
  for (const auto& c : charges) w += econ.riders[c.rider].value;
  for (const auto& s : steps) w -= s.cost;
  return w;
}

namespace {

// Runs periods state.time .. T-1, appending to `trace`.
void simulate(const Economy& econ, Mechanism& mech, PlatformState state, const Strategy& strategy, Trace& trace) {
  const int n = econ.num_drivers();
  trace.states.push_back(state);
  while (state.time < econ.horizon) {
    const int t = state.time;
    const auto disp = mech.dispatch(state);
    ActionProfile dispatched(n);
    ActionProfile taken(n);
    for (int i = 0; i < n; ++i) {
      dispatched[i] = disp[i].action;
      const auto options = available_actions(econ, state, i, disp[i].action);
      const Action choice = strategy(i, state, disp[i].action, options);
      if (std::find(options.begin(), options.end(), choice) == options.end())
        throw ModelError("strategy chose an illegal action for driver " + std::to_string(i) + " at t=" +
                         std::to_string(t));
      taken[i] = choice;
      if (state.drivers[i].phase != Phase::Available) continue;
      StepRecord rec{t, i, disp[i].action, choice, choice == disp[i].action ? disp[i].payment : 0,
                     action_cost(econ, state, i, choice)};
      trace.utility[i] += rec.payment - rec.cost;
      if (choice.rider >= 0) trace.charges.push_back({t, choice.rider, i, rec.payment});
      trace.steps.push_back(rec);
    }
    mech.observe(state, dispatched, taken);
    state = apply_actions(econ, state, taken);
    trace.actions.push_back(std::move(taken));
    trace.states.push_back(state);
  }
}

std::string encode(const Economy& econ, const Action& a) {
  switch (a.kind) {
    case Action::Kind::Stay:
      return "-";
    case Action::Kind::Exit:
      return "exit";
    case Action::Kind::Trip:
      return econ.locations[a.dest] + (a.rider >= 0 ? "+r" + std::to_string(a.rider) : std::string{});
  }
  return "?";
}

Money utility_before(const Trace& trace, int driver, int time) {
  Money u = 0;
  for (const auto& s : trace.steps)
    if (s.driver == driver && s.time < time) u += s.payment - s.cost;
  return u;
}

std::vector<Money> regrets(const Economy& econ, const Mechanism& prototype, std::uint64_t seed, int only) {
  const int n = econ.num_drivers();
  auto mech = prototype.clone();
  mech->init(econ, seed);

  // Straightforward run, keeping a mechanism snapshot before each dispatch.
  Trace base;
  base.utility.assign(n, 0);
  std::vector<std::unique_ptr<Mechanism>> snapshots;
  std::vector<std::vector<Dispatched>> dispatches;
  PlatformState state = initial_state(econ);
  base.states.push_back(state);
  while (state.time < econ.horizon) {
    snapshots.push_back(mech->clone());
    const auto disp = mech->dispatch(state);
    ActionProfile taken(n);
    for (int i = 0; i < n; ++i) {
      taken[i] = disp[i].action;
      if (state.drivers[i].phase != Phase::Available) continue;
      StepRecord rec{state.time, i, disp[i].action, disp[i].action, disp[i].payment,
                     action_cost(econ, state, i, disp[i].action)};
      base.utility[i] += rec.payment - rec.cost;
      base.steps.push_back(rec);
    }
    mech->observe(state, taken, taken);
    dispatches.push_back(disp);
    state = apply_actions(econ, state, taken);
    base.states.push_back(state);
  }

  std::vector<Money> out(n, 0);
  for (int t = 0; t < econ.horizon; ++t) {
    const auto& s = base.states[t];
    for (int i = 0; i < n; ++i) {
      if (only >= 0 && i != only) continue;
      if (s.drivers[i].phase != Phase::Available) continue;
      const Action planned = dispatches[t][i].action;
      const Money prefix = utility_before(base, i, t);
      for (const auto& alt : available_actions(econ, s, i, planned)) {
        if (alt == planned) continue;
        auto branch_mech = snapshots[t]->clone();
        Trace branch;
        branch.utility.assign(n, 0);
        simulate(econ, *branch_mech, s, scripted({{i, t, alt}}), branch);
        out[i] = std::max(out[i], prefix + branch.utility[i] - base.utility[i]);
      }
    }
  }
  return out;
}

Money welfare_without(const Economy& econ, const PlatformState& state, int driver) {
  if (state.time >= econ.horizon) return 0;
  ShiftedEconomy sh = shift_economy(econ, state);
  for (std::size_t k = 0; k < sh.driver_ids.size(); ++k) {
    if (sh.driver_ids[k] == driver) {
      sh.econ.drivers.erase(sh.econ.drivers.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  return omega(sh.econ);
}

}  // namespace

Trace run_simulation(const Economy& econ, Mechanism& mech, const Strategy& strategy, std::uint64_t seed) {
  mech.init(econ, seed);
  Trace trace;
  trace.mechanism = mech.name();
  trace.utility.assign(econ.drivers.size(), 0);
  simulate(econ, mech, initial_state(econ), strategy, trace);
  trace.replans = mech.replans();
  return trace;
}

std::string dump_trace(const Economy& econ, const Trace& trace) {
  std::ostringstream os;
  os << "# trace mechanism=" << trace.mechanism << " horizon=" << econ.horizon << " drivers=" << econ.num_drivers()
     << "\n# step t driver dispatched taken payment cost\n# charge t rider driver amount\n# replan t\n";
  std::size_t next_replan = 0;
  int last_t = -1;
  for (const auto& s : trace.steps) {
    if (s.time != last_t) {
      while (next_replan < trace.replans.size() && trace.replans[next_replan] <= s.time)
        os << "replan " << trace.replans[next_replan++] << '\n';
      last_t = s.time;
    }
    os << "step " << s.time << ' ' << s.driver << ' ' << encode(econ, s.dispatched) << ' ' << encode(econ, s.taken)
       << ' ' << s.payment << ' ' << s.cost << '\n';
  }
  for (const auto& c : trace.charges)
    os << "charge " << c.time << ' ' << c.rider << ' ' << c.driver << ' ' << c.amount << '\n';
  for (std::size_t i = 0; i < trace.utility.size(); ++i) os << "utility " << i << ' ' << trace.utility[i] << '\n';
  os << "welfare " << trace.welfare(econ) << '\n';
  return os.str();
}

bool replay_matches(const Economy& econ, const Trace& trace) {
  if (trace.states.empty()) return false;
  PlatformState state = trace.states.front();
  if (state != initial_state(econ)) return false;
  for (std::size_t k = 0; k < trace.actions.size(); ++k) {
    state = apply_actions(econ, state, trace.actions[k]);
    if (state != trace.states[k + 1]) return false;
  }
  return true;
}

Money single_deviation_regret(const Economy& econ, const Mechanism& prototype, int driver, std::uint64_t seed) {
  return regrets(econ, prototype, seed, driver)[driver];
}

std::vector<Money> single_deviation_regrets(const Economy& econ, const Mechanism& prototype, std::uint64_t seed) {
  return regrets(econ, prototype, seed, -1);
}

std::vector<std::vector<Money>> dynamic_vcg_payments(const Economy& econ) {
  auto mech = stp_mechanism();
  const Trace base = run_simulation(econ, *mech, straightforward(), 0);
  const int n = econ.num_drivers();
  std::vector<std::vector<Money>> pay(n, std::vector<Money>(econ.horizon, 0));
  for (int t = 0; t < econ.horizon; ++t) {
    Money served = 0;
    for (const auto& c : base.charges)
      if (c.time == t) served += econ.riders[c.rider].value;
    for (int i = 0; i < n; ++i) {
      Money others = served;
      for (const auto& s : base.steps)
        if (s.time == t && s.driver != i) others -= s.cost;
      pay[i][t] = others + welfare_without(econ, base.states[t + 1], i) - welfare_without(econ, base.states[t], i);
    }
  }
  return pay;
}

}  // namespace stp
