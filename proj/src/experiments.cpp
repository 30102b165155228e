#include "stp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#ifndef STP_CODE_VERSION
#define STP_CODE_VERSION "unknown"
#endif

namespace stp {

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Event:
      return "event";
    case Scenario::Rush:
      return "rush";
    case Scenario::Airport:
      return "airport";
  }
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "event") return Scenario::Event;
  if (name == "rush") return Scenario::Rush;
  if (name == "airport") return Scenario::Airport;
  throw ModelError("unknown scenario '" + name + "' (expected event, rush or airport)");
}

Money sample_value_cents(std::mt19937_64& rng, double mean_dollars) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double dollars = -mean_dollars * std::log1p(-u);
  return static_cast<Money>(std::floor(dollars * static_cast<double>(kCentsPerDollar) + 0.5));
}

namespace {

int scaled(int count, double scale) { return static_cast<int>(std::lround(count * scale)); }

Economy unit_triangle(int horizon) {
  Economy e;
  e.horizon = horizon;
  e.locations = {"A", "B", "C"};
  e.dist.assign(3, std::vector<int>(3, 1));
  e.set_linear_costs(3 * kCentsPerDollar, kCentsPerDollar);
  return e;
}

void add_riders(Economy& e, std::mt19937_64& rng, int count, int o, int d, int t, double mean) {
  for (int k = 0; k < count; ++k) e.riders.push_back({o, d, t, sample_value_cents(rng, mean)});
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Economy gen_scenario_event(int n_cb1, std::uint64_t seed, double scale) {
  check_sweep_value(Scenario::Event, n_cb1);
  enum { A, B, C };
  Economy e = unit_triangle(2);
  for (int k = 0; k < scaled(15, scale); ++k) e.drivers.push_back({true, C, 0});
  for (int k = 0; k < scaled(10, scale); ++k) e.drivers.push_back({true, B, 0});
  std::mt19937_64 rng(seed);
  add_riders(e, rng, scaled(20, scale), C, B, 0, 10.0);
  add_riders(e, rng, scaled(10, scale), B, C, 0, 10.0);
  add_riders(e, rng, scaled(10, scale), B, A, 0, 10.0);
  add_riders(e, rng, scaled(n_cb1, scale), C, B, 1, 10.0);
  require_valid(e);
  return e;
}

Economy gen_scenario_rush(int n_cb, std::uint64_t seed, double scale) {
  check_sweep_value(Scenario::Rush, n_cb);
  enum { A, B, C };
  constexpr int kHorizon = 20;
  Economy e = unit_triangle(kHorizon);
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < scaled(10, scale); ++k) e.drivers.push_back({true, a, 0});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> loc(0, 2);
  std::uniform_int_distribution<int> start(0, kHorizon - 1);
  for (int k = 0; k < scaled(100, scale); ++k) {
    const int o = loc(rng);
    const int d = loc(rng);
    const int t = start(rng);
    e.riders.push_back({o, d, t, sample_value_cents(rng, 10.0)});
  }
  for (int t = 0; t < kHorizon; ++t) add_riders(e, rng, scaled(n_cb, scale), C, B, t, 20.0);
  require_valid(e);
  return e;
}

Economy gen_scenario_airport(int n_da, std::uint64_t seed, double scale) {
  check_sweep_value(Scenario::Airport, n_da);
  enum { A, D };
  constexpr int kHorizon = 20;
  Economy e;
  e.horizon = kHorizon;
  e.locations = {"A", "D"};
  e.dist = {{1, 2}, {2, 1}};
  e.set_linear_costs(3 * kCentsPerDollar, kCentsPerDollar);
  for (int loc : {A, D})
    for (int k = 0; k < scaled(20, scale); ++k) e.drivers.push_back({true, loc, 0});
  std::mt19937_64 rng(seed);
  for (int t = 0; t < kHorizon; ++t) {
    add_riders(e, rng, scaled(40, scale), D, D, t, 10.0);
    if (t + 2 > kHorizon) continue;
    add_riders(e, rng, scaled(n_da, scale), D, A, t, 40.0);
    add_riders(e, rng, scaled(40 - n_da, scale), A, D, t, 40.0);
  }
  require_valid(e);
  return e;
}

Economy gen_scenario(Scenario s, int sweep_value, std::uint64_t seed, double scale) {
  switch (s) {
    case Scenario::Event:
      return gen_scenario_event(sweep_value, seed, scale);
    case Scenario::Rush:
      return gen_scenario_rush(sweep_value, seed, scale);
    case Scenario::Airport:
      return gen_scenario_airport(sweep_value, seed, scale);
  }
  throw ModelError("unknown scenario");
}

std::vector<int> default_sweep(Scenario s) {
  std::vector<int> out;
  const int hi = s == Scenario::Airport ? 40 : 100;
  const int step = s == Scenario::Airport ? 5 : 20;
  for (int v = 0; v <= hi; v += step) out.push_back(v);
  return out;
}

void check_sweep_value(Scenario s, int value) {
  const int hi = s == Scenario::Airport ? 40 : 100;
  if (value < 0 || value > hi)
    throw ModelError("sweep value " + std::to_string(value) + " outside [0, " + std::to_string(hi) + "] for the " +
                     scenario_name(s) + " scenario");
}

Metrics trace_metrics(const Economy& econ, const Trace& trace, bool per_period_od) {
  Metrics m;
  m.welfare = trace.welfare(econ);
  long on_platform = 0;
  long carrying = 0;
  std::map<Trip, Money> revenue;
  for (const auto& s : trace.steps) {
    if (s.taken.kind != Action::Kind::Trip) continue;
    const int a = trace.states[s.time].drivers[s.driver].loc;
    const int len = econ.distance(a, s.taken.dest);
    on_platform += len;
    const Trip key{a, s.taken.dest, per_period_od ? s.time : -1};
    m.od[key].drivers += 1;
    if (s.taken.rider < 0) continue;
    carrying += len;
    ++m.od[key].transacted;
    revenue[key] += s.payment;
  }
  m.time_efficiency = on_platform > 0 ? static_cast<double>(carrying) / static_cast<double>(on_platform) : 0.0;
  for (auto& [key, st] : m.od) {
    if (!per_period_od) st.drivers /= econ.horizon;
    if (st.transacted > 0) st.mean_price = static_cast<double>(revenue[key]) / st.transacted;
  }
  return m;
}

std::uint64_t replication_seed(std::uint64_t base, int sweep_value, int replication) {
  return splitmix(splitmix(base ^ splitmix(static_cast<std::uint64_t>(sweep_value))) +
                  static_cast<std::uint64_t>(replication));
}

MetricsTable run_batch(const ScenarioParams& params) {
  if (params.replications < 1) throw ModelError("replications must be at least 1");
  for (int v : params.sweep) check_sweep_value(params.scenario, v);
  MetricsTable table;
  table.params = params;
  const bool per_period_od = params.scenario == Scenario::Event;
  for (int v : params.sweep) {
    for (int r = 0; r < params.replications; ++r) {
      const std::uint64_t seed = replication_seed(params.seed, v, r);
      try {
        const Economy econ = gen_scenario(params.scenario, v, seed, params.scale);
        for (const auto& name : params.mechanisms) {
          auto mech = make_mechanism(name);
          const auto prototype = mech->clone();
          const Trace trace = run_simulation(econ, *mech, straightforward(), seed);
          Observation obs{v, r, name, trace_metrics(econ, trace, per_period_od)};
          if (params.regret && econ.num_drivers() > 0) {
            const auto regrets = single_deviation_regrets(econ, *prototype, seed);
            double total = 0;
            for (Money x : regrets) total += static_cast<double>(x);
            obs.metrics.mean_regret = total / econ.num_drivers();
            obs.metrics.has_regret = true;
          }
          table.rows.push_back(std::move(obs));
        }
      } catch (const std::exception& e) {
        throw ModelError(scenario_name(params.scenario) + " sweep value " + std::to_string(v) + " replication " +
                         std::to_string(r) + ": " + e.what());
      }
    }
  }
  return table;
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

std::string od_label(const Economy& econ, const Trip& key) {
  std::string s = econ.locations[key.from] + "-" + econ.locations[key.to];
  if (key.start >= 0) s += "-" + std::to_string(key.start);
  return s;
}

using Extractor = std::function<std::optional<double>(const Metrics&)>;

void write_metric(const MetricsTable& table, const std::filesystem::path& file, const Extractor& get) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ModelError("cannot write " + file.string());
  out << "sweep_value,mechanism,mean,std,n\n";
  for (int v : table.params.sweep) {
    for (const auto& name : table.params.mechanisms) {
      std::vector<double> xs;
      for (const auto& row : table.rows)
        if (row.sweep_value == v && row.mechanism == name)
          if (auto x = get(row.metrics)) xs.push_back(*x);
      const Summary s = summarize(xs);
      out << v << ',' << name << ',' << (s.n > 0 ? number(s.mean) : "nan") << ',' << (s.n > 0 ? number(s.std) : "nan")
          << ',' << s.n << '\n';
    }
  }
  if (!out) throw ModelError("failed writing " + file.string());
}

}  // namespace

std::vector<std::filesystem::path> export_results(const MetricsTable& table, const std::filesystem::path& dir) {
  const auto& p = table.params;
  const std::filesystem::path root = dir / scenario_name(p.scenario);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw ModelError("cannot create " + root.string() + ": " + ec.message());

  std::vector<std::filesystem::path> files;
  auto emit = [&](const std::string& metric, const Extractor& get) {
    files.push_back(root / (metric + ".csv"));
    write_metric(table, files.back(), get);
  };
  const double dollars = static_cast<double>(kCentsPerDollar);
  emit("welfare", [&](const Metrics& m) { return std::optional<double>(static_cast<double>(m.welfare) / dollars); });
  emit("efficiency", [](const Metrics& m) { return std::optional<double>(m.time_efficiency); });
  if (p.regret)
    emit("regret", [&](const Metrics& m) {
      return m.has_regret ? std::optional<double>(m.mean_regret / dollars) : std::nullopt;
    });

  // Per-OD series over every (origin, destination[, period]) seen in any run.
  std::set<Trip> keys;
  for (const auto& row : table.rows)
    for (const auto& [key, st] : row.metrics.od) keys.insert(key);
  const Economy layout = gen_scenario(p.scenario, p.sweep.empty() ? 0 : p.sweep.front(), p.seed, p.scale);
  for (const Trip& key : keys) {
    const std::string label = od_label(layout, key);
    emit("drivers_" + label, [key](const Metrics& m) {
      const auto it = m.od.find(key);
      return std::optional<double>(it == m.od.end() ? 0.0 : it->second.drivers);
    });
    emit("price_" + label, [key, dollars](const Metrics& m) -> std::optional<double> {
      const auto it = m.od.find(key);
      if (it == m.od.end() || it->second.transacted == 0) return std::nullopt;
      return it->second.mean_price / dollars;
    });
  }

  nlohmann::ordered_json manifest;
  manifest["schema_version"] = kResultsSchemaVersion;
  manifest["code_version"] = STP_CODE_VERSION;
  manifest["scenario"] = scenario_name(p.scenario);
  manifest["sweep"] = p.sweep;
  manifest["replications"] = p.replications;
  manifest["seed"] = p.seed;
  manifest["scale"] = p.scale;
  manifest["mechanisms"] = p.mechanisms;
  manifest["regret"] = p.regret;
  manifest["money_unit"] = "dollars";
  manifest["columns"] = {"sweep_value", "mechanism", "mean", "std", "n"};
  nlohmann::ordered_json listed = nlohmann::ordered_json::array();
  for (const auto& f : files) listed.push_back(f.filename().string());
  manifest["files"] = listed;
  const auto manifest_path = root / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw ModelError("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  files.push_back(manifest_path);
  return files;
}

std::string format_summary(const MetricsTable& table) {
  std::ostringstream os;
  os << "# " << scenario_name(table.params.scenario) << ": sweep mechanism welfare($) efficiency regret($)\n";
  for (int v : table.params.sweep) {
    for (const auto& name : table.params.mechanisms) {
      std::vector<double> w, eff, reg;
      for (const auto& row : table.rows) {
        if (row.sweep_value != v || row.mechanism != name) continue;
        w.push_back(static_cast<double>(row.metrics.welfare) / static_cast<double>(kCentsPerDollar));
        eff.push_back(row.metrics.time_efficiency);
        if (row.metrics.has_regret) reg.push_back(row.metrics.mean_regret / static_cast<double>(kCentsPerDollar));
      }
      char line[160];
      const Summary sw = summarize(w);
      const Summary se = summarize(eff);
      const Summary sr = summarize(reg);
      if (sr.n > 0)
        std::snprintf(line, sizeof line, "%4d %-16s %10.2f %6.3f %8.3f\n", v, name.c_str(), sw.mean, se.mean, sr.mean);
      else
        std::snprintf(line, sizeof line, "%4d %-16s %10.2f %6.3f %8s\n", v, name.c_str(), sw.mean, se.mean, "-");
      os << line;
    }
  }
  return os.str();
}

}  // namespace stp
