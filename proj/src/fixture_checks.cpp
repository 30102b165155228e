#include "stp/fixture_checks.hpp"

#include <sstream>

#include "stp/fixtures.hpp"
#include "stp/mechanism.hpp"
#include "stp/paths.hpp"
#include "stp/plan.hpp"

namespace stp {
namespace {

class Checker {
 public:
  explicit Checker(std::string name) { result_.name = std::move(name); }

  template <typename T>
  void expect(const std::string& what, const T& expected, const T& got) {
    std::ostringstream os;
    const bool ok = expected == got;
    os << (ok ? "ok       " : "MISMATCH ") << what << " expected " << expected << " got " << got;
    record(ok, os.str());
  }

  void expect_true(const std::string& what, bool got) { expect(what, std::string("true"), std::string(got ? "true" : "false")); }

  void expect_at_most(const std::string& what, Money bound, Money got) {
    std::ostringstream os;
    const bool ok = got <= bound;
    os << (ok ? "ok       " : "MISMATCH ") << what << " expected <= " << bound << " got " << got;
    record(ok, os.str());
  }

  void expect_at_least(const std::string& what, Money bound, Money got) {
    std::ostringstream os;
    const bool ok = got >= bound;
    os << (ok ? "ok       " : "MISMATCH ") << what << " expected >= " << bound << " got " << got;
    record(ok, os.str());
  }

  CheckResult done() { return std::move(result_); }

 private:
  void record(bool ok, std::string line) {
    result_.passed = result_.passed && ok;
    result_.lines.push_back(std::move(line));
  }
  CheckResult result_;
};

Trip trip(const Economy& e, const std::string& a, const std::string& b, int t) {
  return {e.location_index(a), e.location_index(b), t};
}

std::string price_label(const Economy& e, const Trip& t) { return "price " + trip_label(e, t); }

CheckResult superbowl() {
  Checker c("superbowl");
  const Economy e = fixture_economy("superbowl");
  const Plan plan = plan_driver_pessimal(e);
  const struct {
    const char* a;
    const char* b;
    int t;
    Money p;
  } expected[] = {{"C", "B", 0, 55}, {"B", "C", 0, 0},  {"B", "A", 0, 70},
                  {"C", "B", 1, 75}, {"B", "B", 1, 20}, {"C", "A", 1, 80}};
  for (const auto& x : expected) {
    const Trip t = trip(e, x.a, x.b, x.t);
    c.expect(price_label(e, t), x.p, plan.prices.at(t));
  }
  for (int i = 0; i < e.num_drivers(); ++i)
    c.expect("utility of driver " + std::to_string(i), Money{50}, plan.driver_utility[i]);
  c.expect("welfare", Money{215}, plan.dispatch.welfare);
  c.expect_true("competitive equilibrium", verify_ce(e, plan).ok());
  return c.done();
}

// Driver 2 (at B) relocates B -> B at t = 0 instead of carrying rider 2.
CheckResult superbowl_replan() {
  Checker c("superbowl-replan");
  const Economy e = fixture_economy("superbowl");
  PlanMechanism mech(PlanKind::Pessimal, ReplanPolicy::OnDeviation);
  const int b = e.location_index("B");
  const int cc = e.location_index("C");
  const Trace trace = run_simulation(e, mech, scripted({{2, 0, Action::trip(b)}}), 0);
  c.expect("replan periods", std::string("1"),
           trace.replans.size() == 1 ? std::to_string(trace.replans[0]) : std::to_string(trace.replans.size()) + " replans");
  const auto& shifted = mech.current_economy();
  const Plan& plan = mech.current_plan();
  c.expect("plan offset", 1, shifted.offset);
  const struct {
    const char* a;
    const char* b;
    Money p;
  } expected[] = {{"C", "A", 90}, {"C", "B", 85}, {"B", "B", 5}};
  for (const auto& x : expected) {
    const Trip t = trip(shifted.econ, x.a, x.b, 0);
    c.expect(price_label(e, trip(e, x.a, x.b, 1)), x.p, plan.prices.at(t));
  }
  c.expect("potential (C,1)", Money{70}, plan.potentials.at(cc, 0));
  c.expect("potential (B,2)", Money{-5}, plan.potentials.at(b, 1));
  c.expect("potential (B,1)", Money{-10}, plan.potentials.at(b, 0));
  int k = -1;
  for (std::size_t i = 0; i < shifted.driver_ids.size(); ++i)
    if (shifted.driver_ids[i] == 2) k = static_cast<int>(i);
  c.expect("driver 2 continuation utility", Money{-10}, k >= 0 ? plan.driver_utility[k] : Money{0});
  c.expect_true("replanned plan is a competitive equilibrium", verify_ce(shifted.econ, plan).ok());
  return c.done();
}

// Same deviation under the static mechanism: the plan is not updated and
// the rider the deviating driver would have carried at t = 1 is stranded.
CheckResult superbowl_static() {
  Checker c("superbowl-static");
  const Economy e = fixture_economy("superbowl");
  const Plan plan = plan_driver_pessimal(e);
  int stranded = -1;
  for (const auto& leg : plan.dispatch.paths[2].legs)
    if (leg.trip.start == 1) stranded = leg.rider;
  auto mech = static_ce_mechanism(PlanKind::Pessimal);
  const Trace trace =
      run_simulation(e, *mech, scripted({{2, 0, Action::trip(e.location_index("B"))}}), 0);
  bool served = false;
  for (const auto& ch : trace.charges) served = served || ch.rider == stranded;
  c.expect_true("planned rider exists", stranded >= 0);
  c.expect_true("planned rider left unserved", !served);
  if (stranded >= 0)
    c.expect_true("stranded rider values the trip above its price",
                  e.riders[stranded].value > plan.prices.at(e.riders[stranded].trip()));
  c.expect("replans", std::size_t{0}, trace.replans.size());
  c.expect_at_most("welfare after deviation", Money{214}, trace.welfare(e));
  return c.done();
}

CheckResult example1() {
  Checker c("example1");
  const Economy e = fixture_economy("example1");
  const auto paths = enumerate_feasible_paths(e, e.drivers[0]);
  c.expect("feasible paths (with never-enter)", std::size_t{4}, paths.size());
  const struct {
    std::vector<Trip> trips;
    Money cost;
  } expected[] = {{{}, 0},
                  {{trip(e, "A", "A", 0), trip(e, "A", "A", 1)}, 4},
                  {{trip(e, "A", "B", 0)}, 4},
                  {{trip(e, "A", "A", 0)}, 3}};
  for (const auto& x : expected) {
    bool found = false;
    for (const auto& p : paths) found = found || p.trips == x.trips;
    std::string label = "path";
    for (const auto& t : x.trips) label += " " + trip_label(e, t);
    if (x.trips.empty()) label += " never-enter";
    c.expect_true(label + " enumerated", found);
    c.expect(label + " cost", x.cost, path_cost(e, e.drivers[0], Path{x.trips}));
  }
  const Plan plan = plan_driver_pessimal(e);
  c.expect("welfare", Money{7}, plan.dispatch.welfare);
  c.expect_true("competitive equilibrium", verify_ce(e, plan).ok());
  return c.done();
}

CheckResult example3() {
  Checker c("example3");
  const Economy e = fixture_economy("example3");
  auto mech = stp_mechanism();
  const Trace trace = run_simulation(e, *mech, straightforward(), 0);
  c.expect("STP replans without deviation", std::size_t{0}, trace.replans.size());
  for (const auto& ch : trace.charges) c.expect("charge to rider " + std::to_string(ch.rider), Money{5}, ch.amount);
  c.expect("riders served", std::size_t{2}, trace.charges.size());
  return c.done();
}

CheckResult example3_naive() {
  Checker c("example3-naive-replan");
  const Economy e = fixture_economy("example3");
  PlanMechanism naive(PlanKind::Pessimal, ReplanPolicy::Always);
  const Trace trace = run_simulation(e, naive, straightforward(), 0);
  c.expect("naive replans", std::size_t{1}, trace.replans.size());
  const auto& shifted = naive.current_economy();
  c.expect(price_label(e, trip(e, "B", "B", 1)) + " after replan", Money{0},
           naive.current_plan().prices.at(trip(shifted.econ, "B", "B", 0)));
  c.expect("driver 0 utility following dispatches", Money{0}, trace.utility[0]);

  PlanMechanism naive2(PlanKind::Pessimal, ReplanPolicy::Always);
  const Trace dev = run_simulation(e, naive2, scripted({{0, 0, Action::trip(e.location_index("A"))}}), 0);
  c.expect("driver 0 utility after relocating to A", Money{4}, dev.utility[0]);
  c.expect("naive single-deviation regret of driver 0", Money{4},
           single_deviation_regret(e, PlanMechanism(PlanKind::Pessimal, ReplanPolicy::Always), 0, 0));
  const auto stp = single_deviation_regrets(e, *stp_mechanism(), 0);
  for (std::size_t i = 0; i < stp.size(); ++i)
    c.expect("STP regret of driver " + std::to_string(i), Money{0}, stp[i]);
  return c.done();
}

CheckResult rider_vcg() {
  Checker c("rider-vcg");
  const Economy e = fixture_economy("rider-vcg");
  const Plan plan = plan_driver_pessimal(e);
  c.expect("p(A,A,0) + p(A,A,1)", Money{8},
           plan.prices.at(trip(e, "A", "A", 0)) + plan.prices.at(trip(e, "A", "A", 1)));
  c.expect(price_label(e, trip(e, "A", "B", 0)), Money{8}, plan.prices.at(trip(e, "A", "B", 0)));
  const Money vcg[] = {2, 3};
  for (int j = 0; j < 2; ++j) {
    const RiderVcg r = rider_vcg_price(e, j);
    c.expect_true("VCG price of rider " + std::to_string(j) + " defined", r.defined);
    c.expect("VCG price of rider " + std::to_string(j), vcg[j], r.price);
    c.expect_true("reduced-value economy keeps rider " + std::to_string(j) + " at or below VCG",
                  r.minimum_price_holds());
  }
  return c.done();
}

CheckResult optimal_replan() {
  Checker c("optimal-replan");
  const Economy e = fixture_economy("optimal-replan");
  const Plan plan = plan_driver_optimal(e);
  c.expect("driver 0 utility (driver-optimal)", Money{1}, plan.driver_utility[0]);
  c.expect("driver 1 utility (driver-optimal)", Money{1}, plan.driver_utility[1]);
  c.expect(price_label(e, trip(e, "C", "C", 1)), Money{0}, plan.prices.at(trip(e, "C", "C", 1)));
  c.expect(price_label(e, trip(e, "C", "C", 2)), Money{1}, plan.prices.at(trip(e, "C", "C", 2)));
  c.expect(price_label(e, trip(e, "A", "A", 2)), Money{1}, plan.prices.at(trip(e, "A", "A", 2)));

  // Driver 0 is planned toward C but stays at B instead.
  PlanMechanism mech(PlanKind::Optimal, ReplanPolicy::OnDeviation);
  const Trace dev = run_simulation(e, mech, scripted({{0, 0, Action::trip(e.location_index("B"))}}), 0);
  const auto& shifted = mech.current_economy();
  c.expect(price_label(e, trip(e, "C", "C", 2)) + " after replan", Money{5},
           mech.current_plan().prices.at(trip(shifted.econ, "C", "C", 1)));
  c.expect_at_least("driver 0 gain from the deviation", Money{1}, dev.utility[0] - plan.driver_utility[0]);
  return c.done();
}

CheckResult dynamic_vcg() {
  Checker c("dynamic-vcg");
  const Economy e = fixture_economy("optimal-replan");
  const auto pay = dynamic_vcg_payments(e);
  const Money expected[] = {-5, 1, 5};
  for (int t = 0; t < 3; ++t)
    c.expect("driver 0 payment at t=" + std::to_string(t), expected[t], pay[0][t]);
  return c.done();
}

CheckResult myopic_superbowl() {
  Checker c("myopic-superbowl");
  const Economy e = fixture_economy("superbowl");
  MyopicMechanism mech;
  const Trace trace = run_simulation(e, mech, straightforward(), 0);
  c.expect_at_most("welfare", Money{25}, trace.welfare(e));

  // Clearing prices at (C,1) when no driver is there.
  MyopicMechanism probe;
  probe.init(e, 0);
  PlatformState at1 = initial_state(e);
  at1.time = 1;
  for (auto& d : at1.drivers) d = DriverState::gone();
  probe.dispatch(at1);
  const int cc = e.location_index("C");
  c.expect(price_label(e, trip(e, "C", "B", 1)), Money{100}, probe.last_price(cc, e.location_index("B")));
  c.expect(price_label(e, trip(e, "C", "A", 1)), Money{200}, probe.last_price(cc, e.location_index("A")));
  c.expect_at_least("driver 0 single-deviation regret", Money{20}, single_deviation_regret(e, MyopicMechanism(), 0, 0));
  return c.done();
}

}  // namespace

std::vector<std::string> fixture_check_names() {
  return {"superbowl", "superbowl-replan", "superbowl-static", "example1",    "example3",
          "example3-naive-replan", "rider-vcg", "optimal-replan", "dynamic-vcg", "myopic-superbowl"};
}

CheckResult run_fixture_check(const std::string& name) {
  if (name == "superbowl") return superbowl();
  if (name == "superbowl-replan") return superbowl_replan();
  if (name == "superbowl-static") return superbowl_static();
  if (name == "example1") return example1();
  if (name == "example3") return example3();
  if (name == "example3-naive-replan") return example3_naive();
  if (name == "rider-vcg") return rider_vcg();
  if (name == "optimal-replan") return optimal_replan();
  if (name == "dynamic-vcg") return dynamic_vcg();
  if (name == "myopic-superbowl") return myopic_superbowl();
  throw ModelError("unknown example '" + name + "'");
}

}  // namespace stp
