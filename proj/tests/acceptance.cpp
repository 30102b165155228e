// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Usage: stp_acceptance [results-dir]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stp/experiments.hpp"
#include "stp/fixture_checks.hpp"
#include "stp/fixtures.hpp"
#include "stp/flow.hpp"
#include "stp/mechanism.hpp"
#include "stp/plan.hpp"
#include "support.hpp"

using namespace stp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

// Runs named fixture checks; the detail lists the first mismatch.
Outcome fixture_checks(const std::vector<std::string>& names) {
  Outcome out;
  for (const auto& name : names) {
    const CheckResult r = run_fixture_check(name);
    if (r.passed) continue;
    out.pass = false;
    for (const auto& line : r.lines)
      if (line.rfind("MISMATCH", 0) == 0) {
        out.detail += name + ": " + line + "; ";
        break;
      }
  }
  if (out.pass) out.detail = std::to_string(names.size()) + " example checks";
  return out;
}

constexpr std::uint64_t kSuiteSeed = 20240601;

std::vector<Economy> suite_economies(int n, const testing::RandomLimits& lim, std::uint64_t salt) {
  std::vector<Economy> out;
  for (int k = 0; k < n; ++k) out.push_back(testing::random_economy(kSuiteSeed + salt + k, lim));
  return out;
}

Outcome superbowl_pessimal() {
  const auto t0 = Clock::now();
  Outcome out = fixture_checks({"superbowl"});
  const Economy e = fixture_economy("superbowl");
  const Money oracle = testing::brute_force_welfare(e);
  const Money solved = plan_driver_pessimal(e).dispatch.welfare;
  const double secs = seconds_since(t0);
  if (solved != oracle) {
    out.pass = false;
    out.detail += "welfare " + std::to_string(solved) + " vs oracle " + std::to_string(oracle) + "; ";
  }
  if (secs >= 1.0) {
    out.pass = false;
    out.detail += "took " + fmt(secs) + " s; ";
  }
  if (out.pass) out.detail = "prices and utilities exact, welfare " + std::to_string(solved) + " = oracle, " + fmt(secs, 3) + " s";
  return out;
}

Outcome oracle_equivalence(const std::vector<Economy>& econs) {
  const auto t0 = Clock::now();
  int mismatches = 0;
  for (const auto& e : econs) mismatches += omega(e) != testing::brute_force_welfare(e);
  const double secs = seconds_since(t0);
  Outcome out;
  out.pass = mismatches == 0 && secs < 30.0;
  out.detail = std::to_string(econs.size() - mismatches) + "/" + std::to_string(econs.size()) + " equal, " +
               fmt(secs) + " s";
  return out;
}

Outcome ce_suite(const std::vector<Economy>& econs) {
  int failures = 0;
  std::size_t coalitions = 0;
  std::string first;
  for (std::size_t k = 0; k < econs.size(); ++k) {
    const auto& e = econs[k];
    for (const auto kind : {PlanKind::Pessimal, PlanKind::Optimal}) {
      const Plan p = make_plan(e, kind);
      const CEReport r = verify_ce(e, p);
      const CoreReport core = check_core_sampled(e, p, 500, kSuiteSeed + k);
      coalitions += core.checked;
      if (r.ok() && core.ok()) continue;
      ++failures;
      if (first.empty()) first = "economy " + std::to_string(k) + ": " + r.summary(e);
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = std::to_string(2 * econs.size() - failures) + "/" + std::to_string(2 * econs.size()) +
               " plans pass CE, budget, envy, IR and core (" + std::to_string(coalitions) + " coalitions)";
  if (!first.empty()) out.detail += "; " + first;
  return out;
}

Outcome spe_suite() {
  testing::RandomLimits lim;
  lim.max_horizon = 4;
  const auto econs = suite_economies(100, lim, 50000);
  const auto t0 = Clock::now();
  int nonzero = 0;
  std::size_t drivers = 0;
  for (std::size_t k = 0; k < econs.size(); ++k) {
    const auto r = single_deviation_regrets(econs[k], *stp_mechanism(), k);
    drivers += r.size();
    for (Money x : r) nonzero += x != 0;
  }
  const double secs = seconds_since(t0);
  // Control: the same search must find profitable deviations under driver-optimal replanning.
  int control = 0;
  for (std::size_t k = 0; k < econs.size(); ++k)
    for (Money x : single_deviation_regrets(econs[k], *driver_optimal_mechanism(), k)) control += x > 0;
  Outcome out;
  out.pass = nonzero == 0 && secs < 120.0 && control > 0;
  out.detail = std::to_string(nonzero) + " nonzero regrets over " + std::to_string(drivers) + " drivers, " +
               fmt(secs) + " s; driver-optimal control finds " + std::to_string(control) + " gaming drivers";
  return out;
}

Outcome lattice_suite(const std::vector<Economy>& econs) {
  int order = 0, replica = 0, removal = 0, slack = 0, exchange = 0;
  for (const auto& e : econs) {
    const FlowNetwork net = build_network(e);
    const OptimalFlow f = solve_min_cost_flow(net);
    const Potentials lo = potentials_pessimal(net, f);
    const Potentials hi = potentials_optimal(net, f);
    slack += !check_complementary_slackness(net, f, lo).empty();
    slack += !check_complementary_slackness(net, f, hi).empty();
    const Money base = testing::brute_force_welfare(e);
    for (int i = 0; i < e.num_drivers(); ++i) {
      order += lo.driver(i) > hi.driver(i);
      replica += lo.driver(i) != testing::brute_force_welfare(testing::with_extra_driver(e, e.drivers[i])) - base;
      removal += hi.driver(i) != base - testing::brute_force_welfare(without_driver(e, i));
    }
  }
  std::mt19937_64 rng(kSuiteSeed);
  for (int draw = 0; draw < 100; ++draw) {
    const Economy& e = econs[draw % econs.size()];
    const int nodes = e.num_locations() * e.horizon;
    const int b = static_cast<int>(rng() % nodes);
    const int a2 = static_cast<int>(rng() % nodes);
    const Money w0 = omega(e), wb = omega(e, {{b, 1}}), wbb = omega(e, {{b, 2}});
    const Money wa = omega(e, {{a2, 1}}), wab = omega(e, {{a2, 1}, {b, 1}});
    exchange += (wb - w0 < wbb - wb) || (wab - wa < wbb - wb);
  }
  Outcome out;
  out.pass = order + replica + removal + slack + exchange == 0;
  out.detail = "violations: order " + std::to_string(order) + ", replica " + std::to_string(replica) + ", removal " +
               std::to_string(removal) + ", slackness " + std::to_string(slack) + ", exchange " +
               std::to_string(exchange) + " (" + std::to_string(econs.size()) + " economies, 100 draws)";
  return out;
}

bool is_number(const std::string& s) {
  if (s == "nan") return true;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

// Header, five fields per row, numeric columns, one row per (sweep, mechanism).
std::string csv_problem(const std::filesystem::path& file, std::size_t expected_rows) {
  std::ifstream in(file);
  if (!in) return "missing " + file.string();
  std::string line;
  std::getline(in, line);
  if (line != "sweep_value,mechanism,mean,std,n") return "bad header in " + file.string();
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 5 || !is_number(cells[0]) || !is_number(cells[2]) || !is_number(cells[3]) ||
        cells[4].find_first_not_of("0123456789") != std::string::npos)
      return "bad row '" + line + "' in " + file.string();
    ++rows;
  }
  if (rows != expected_rows) return "expected " + std::to_string(expected_rows) + " rows in " + file.string();
  return {};
}

std::string export_problem(const MetricsTable& t, const std::filesystem::path& dir) {
  const auto files = export_results(t, dir);
  const std::size_t rows = t.params.sweep.size() * t.params.mechanisms.size();
  for (const auto& f : files) {
    if (f.extension() != ".csv") continue;
    const std::string p = csv_problem(f, rows);
    if (!p.empty()) return p;
  }
  return {};
}

Outcome desk_batches(const std::filesystem::path& dir) {
  const auto t0 = Clock::now();
  Outcome out;
  std::ostringstream detail;

  ScenarioParams ev;
  ev.scenario = Scenario::Event;
  ev.sweep = default_sweep(Scenario::Event);
  ev.replications = 50;
  ev.seed = kSuiteSeed;
  const MetricsTable event = run_batch(ev);
  int dominance = 0;
  double stp_regret = 0;
  std::vector<double> myopic_regret(ev.sweep.size(), 0.0);
  for (std::size_t k = 0; k < event.rows.size(); k += 2) {
    const auto& s = event.rows[k];
    const auto& m = event.rows[k + 1];
    dominance += s.metrics.welfare < m.metrics.welfare;
    stp_regret += std::abs(s.metrics.mean_regret);
    const auto idx = std::find(ev.sweep.begin(), ev.sweep.end(), m.sweep_value) - ev.sweep.begin();
    myopic_regret[idx] += m.metrics.mean_regret / ev.replications / static_cast<double>(kCentsPerDollar);
  }
  bool increasing = true;
  for (std::size_t k = 1; k < myopic_regret.size(); ++k) increasing = increasing && myopic_regret[k] > myopic_regret[k - 1];
  detail << "event: " << dominance << " dominance violations, STP regret sum " << stp_regret
         << ", myopic mean regret ($)";
  for (double r : myopic_regret) detail << ' ' << fmt(r);
  const std::string event_csv = export_problem(event, dir);

  ScenarioParams rush;
  rush.scenario = Scenario::Rush;
  rush.sweep = default_sweep(Scenario::Rush);
  rush.replications = 50;
  rush.seed = kSuiteSeed;
  rush.regret = false;
  const std::string rush_csv = export_problem(run_batch(rush), dir);

  ScenarioParams air = rush;
  air.scenario = Scenario::Airport;
  air.sweep = default_sweep(Scenario::Airport);
  const std::string air_csv = export_problem(run_batch(air), dir);

  for (const auto* p : {&event_csv, &rush_csv, &air_csv})
    if (!p->empty()) detail << "; " << *p;
  const double secs = seconds_since(t0);
  detail << "; rush and airport exported; " << fmt(secs, 1) << " s";
  out.pass = dominance == 0 && stp_regret == 0 && increasing && event_csv.empty() && rush_csv.empty() &&
             air_csv.empty();
  out.detail = detail.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path results = argc > 1 ? argv[1] : "results";
  const auto shared = suite_economies(200, testing::RandomLimits{}, 0);

  struct Criterion {
    const char* id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC01", "Super Bowl pessimal plan", superbowl_pessimal},
      {"AC02", "Super Bowl replanning after the stay-at-B deviation", [] { return fixture_checks({"superbowl-replan"}); }},
      {"AC03", "example3 fixture replanning and regret", [] { return fixture_checks({"example3", "example3-naive-replan"}); }},
      {"AC04", "rider VCG prices and the reduced-value construction", [] { return fixture_checks({"rider-vcg"}); }},
      {"AC05", "driver-optimal mechanism and dynamic VCG payments", [] { return fixture_checks({"optimal-replan", "dynamic-vcg"}); }},
      {"AC06", "myopic pricing on the Super Bowl economy", [] { return fixture_checks({"myopic-superbowl"}); }},
      {"AC07", "solver welfare equals exhaustive enumeration", [&] { return oracle_equivalence(shared); }},
      {"AC08", "competitive equilibrium suite", [&] { return ce_suite(shared); }},
      {"AC09", "STP single-deviation regret is zero", spe_suite},
      {"AC10", "lattice, duality and local exchange", [&] { return lattice_suite(shared); }},
      {"AC11", "desk-scale scenario batches", [&] { return desk_batches(results); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ' ' << c.title << " -- " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
