#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stp/economy_io.hpp"
#include "stp/experiments.hpp"
#include "stp/fixture_checks.hpp"
#include "stp/fixtures.hpp"
#include "stp/flow.hpp"
#include "stp/mechanism.hpp"
#include "stp/plan.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EconomySource {
  std::string file;
  std::string fixture;

  void add_to(CLI::App* cmd) {
    auto* f = cmd->add_option("--econ", file, "Economy JSON file");
    auto* x = cmd->add_option("--fixture", fixture, "Embedded fixture name");
    f->excludes(x);
  }

  stp::Economy load() const {
    if (!file.empty()) return stp::load_economy(file);
    if (!fixture.empty()) return stp::fixture_economy(fixture);
    throw UsageError("one of --econ or --fixture is required");
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw stp::ModelError("cannot write " + out);
  f << text;
}

// "exit", "<loc>" (relocate) or "<loc>+r<id>" (carry rider id).
stp::Action parse_action(const stp::Economy& econ, const std::string& text) {
  if (text == "exit") return stp::Action::exit();
  const auto plus = text.find("+r");
  const std::string loc = text.substr(0, plus);
  const int dest = econ.location_index(loc);
  if (plus == std::string::npos) return stp::Action::trip(dest);
  return stp::Action::trip(dest, std::stoi(text.substr(plus + 2)));
}

// "driver:time:action".
stp::Override parse_override(const stp::Economy& econ, const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw UsageError("--deviate expects driver:time:action, got '" + text + "'");
  return {std::stoi(text.substr(0, a)), std::stoi(text.substr(a + 1, b - a - 1)), parse_action(econ, text.substr(b + 1))};
}

// "lo:hi:step" or a comma-separated list.
std::vector<int> parse_sweep(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    int lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || step <= 0 || hi < lo)
      throw UsageError("--sweep expects lo:hi:step with step > 0, got '" + text + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("bad sweep value '" + item + "'");
    }
  }
  return out;
}

std::unique_ptr<stp::Mechanism> mechanism(const std::string& name) {
  try {
    return stp::make_mechanism(name);
  } catch (const stp::ModelError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal pricing engine for ridesharing economies"};
  app.require_subcommand(1);

  EconomySource plan_src, regret_src, sim_src, net_src;
  std::string kind = "pessimal", out, results_dir = "results", mech_name = "stp", example, scenario = "event", sweep, mechanisms = "stp,myopic";
  std::uint64_t seed = 1;
  int driver = -1, reps = 50;
  double scale = 1.0;
  std::vector<std::string> deviations;
  bool solve = false;
  std::optional<bool> regret;

  auto* plan = app.add_subcommand("plan", "Compute a priced CE plan and verify it");
  plan_src.add_to(plan);
  plan->add_option("--kind", kind, "pessimal or optimal")->check(CLI::IsMember({"pessimal", "optimal"}));
  plan->add_option("--out", out, "Write the plan dump here");

  auto* verify = app.add_subcommand("verify-example", "Check a worked example against its known values");
  verify->add_option("name", example, "Example name or 'all'")->required();

  auto* regret_cmd = app.add_subcommand("regret", "Single-deviation regret of each driver under a mechanism");
  regret_src.add_to(regret_cmd);
  regret_cmd->add_option("--mechanism", mech_name, "Mechanism name");
  regret_cmd->add_option("--seed", seed, "Seed for randomized mechanisms");
  regret_cmd->add_option("--driver", driver, "Only this driver");

  auto* sim = app.add_subcommand("simulate", "Run a mechanism and print the trace");
  sim_src.add_to(sim);
  sim->add_option("--mechanism", mech_name, "Mechanism name");
  sim->add_option("--seed", seed, "Seed for randomized mechanisms");
  sim->add_option("--deviate", deviations, "driver:time:action override, action = exit | LOC | LOC+rID");
  sim->add_option("--out", out, "Write the trace here");

  auto* batch = app.add_subcommand("batch", "Run a scenario sweep and export CSV results");
  batch->add_option("--scenario", scenario, "event, rush or airport")->check(CLI::IsMember({"event", "rush", "airport"}));
  batch->add_option("--sweep", sweep, "lo:hi:step or comma list (default: full range)");
  batch->add_option("--reps", reps, "Replications per sweep value")->check(CLI::PositiveNumber);
  batch->add_option("--seed", seed, "Base seed");
  batch->add_option("--scale", scale, "Multiplier on driver and rider counts")->check(CLI::PositiveNumber);
  batch->add_option("--mechanism", mechanisms, "Comma-separated mechanism names");
  batch->add_option("--out", results_dir, "Results directory")->capture_default_str();
  batch->add_flag("--regret,!--no-regret", regret, "Compute single-deviation regret (default: event scenario only)");

  auto* net = app.add_subcommand("dump-network", "Print the flow network, optionally with an optimal flow");
  net_src.add_to(net);
  net->add_flag("--solve", solve, "Include the optimal flow");
  net->add_option("--out", out, "Write the dump here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*plan) {
      const stp::Economy econ = plan_src.load();
      const stp::Plan p = stp::make_plan(econ, kind == "optimal" ? stp::PlanKind::Optimal : stp::PlanKind::Pessimal);
      const stp::CEReport report = stp::verify_ce(econ, p);
      emit(stp::dump_plan(econ, p) + report.summary(econ), out);
      return report.ok() ? kOk : kFailed;
    }
    if (*verify) {
      std::vector<std::string> names;
      if (example == "all") {
        names = stp::fixture_check_names();
      } else {
        const auto known = stp::fixture_check_names();
        if (std::find(known.begin(), known.end(), example) == known.end())
          throw UsageError("unknown example '" + example + "'");
        names = {example};
      }
      bool all = true;
      for (const auto& name : names) {
        const stp::CheckResult r = stp::run_fixture_check(name);
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << '\n';
        for (const auto& line : r.lines) std::cout << "  " << line << '\n';
        all = all && r.passed;
      }
      return all ? kOk : kFailed;
    }
    if (*regret_cmd) {
      const stp::Economy econ = regret_src.load();
      const auto proto = mechanism(mech_name);
      if (driver >= econ.num_drivers()) throw UsageError("--driver out of range");
      std::cout << "# mechanism " << proto->name() << " seed " << seed << "\n# driver regret\n";
      if (driver >= 0) {
        std::cout << driver << ' ' << stp::single_deviation_regret(econ, *proto, driver, seed) << '\n';
      } else {
        const auto r = stp::single_deviation_regrets(econ, *proto, seed);
        for (std::size_t i = 0; i < r.size(); ++i) std::cout << i << ' ' << r[i] << '\n';
      }
      return kOk;
    }
    if (*sim) {
      const stp::Economy econ = sim_src.load();
      auto m = mechanism(mech_name);
      std::vector<stp::Override> overrides;
      for (const auto& d : deviations) overrides.push_back(parse_override(econ, d));
      const stp::Trace trace = stp::run_simulation(econ, *m, stp::scripted(overrides), seed);
      emit(stp::dump_trace(econ, trace), out);
      return kOk;
    }
    if (*batch) {
      stp::ScenarioParams params;
      params.scenario = stp::parse_scenario(scenario);
      params.sweep = sweep.empty() ? stp::default_sweep(params.scenario) : parse_sweep(sweep);
      for (int v : params.sweep) {
        try {
          stp::check_sweep_value(params.scenario, v);
        } catch (const stp::ModelError& e) {
          throw UsageError(e.what());
        }
      }
      params.replications = reps;
      params.seed = seed;
      params.scale = scale;
      params.mechanisms.clear();
      std::istringstream is(mechanisms);
      for (std::string name; std::getline(is, name, ',');) {
        mechanism(name);
        params.mechanisms.push_back(name);
      }
      params.regret = regret.value_or(params.scenario == stp::Scenario::Event);
      const stp::MetricsTable table = stp::run_batch(params);
      std::cout << stp::format_summary(table);
      for (const auto& f : stp::export_results(table, results_dir)) std::cout << "wrote " << f.string() << '\n';
      return kOk;
    }
    if (*net) {
      const stp::Economy econ = net_src.load();
      const stp::FlowNetwork network = stp::build_network(econ);
      if (solve) {
        const stp::OptimalFlow flow = stp::solve_min_cost_flow(network);
        emit(stp::dump_network(econ, network, &flow), out);
      } else {
        emit(stp::dump_network(econ, network), out);
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const stp::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
