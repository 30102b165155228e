#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stp/economy.hpp"
#include "stp/mechanism.hpp"

namespace stp {

enum class Scenario { Event, Rush, Airport };

std::string scenario_name(Scenario s);
// Accepts "event", "rush", "airport"; throws ModelError otherwise.
Scenario parse_scenario(const std::string& name);

// Money in the generated economies is in cents: trips cost 300 per unit of
// distance and leaving early costs 100 per remaining period.
inline constexpr Money kCentsPerDollar = 100;

// Exponential(mean_dollars) in cents by inverse CDF, rounded half up.
Money sample_value_cents(std::mt19937_64& rng, double mean_dollars);

// End of a sporting event: locations A, B, C at unit distance, T = 2,
// 15 drivers at (C, 0) and 10 at (B, 0); riders 20 x (C,B,0), 10 x (B,C,0),
// 10 x (B,A,0) and n_cb1 x (C,B,1), values Exp(mean $10). `scale`
// multiplies every driver and rider count.
Economy gen_scenario_event(int n_cb1, std::uint64_t seed, double scale = 1.0);

// Morning rush: A, B, C at unit distance, T = 20, 10 drivers per location at
// t = 0; 100 background riders with uniform origin, destination and start,
// values Exp($10); n_cb commuters C -> B in every period, values Exp($20).
Economy gen_scenario_rush(int n_cb, std::uint64_t seed, double scale = 1.0);

// Airport: downtown D and airport A, distance 1 within a location and 2
// across, T = 20, 20 drivers at each location at t = 0. Every period has 40
// D -> D riders (Exp($10)); every period that can still complete a crossing
// has n_da riders D -> A and 40 - n_da riders A -> D (Exp($40)).
Economy gen_scenario_airport(int n_da, std::uint64_t seed, double scale = 1.0);

Economy gen_scenario(Scenario s, int sweep_value, std::uint64_t seed, double scale = 1.0);

// Full sweep for each scenario: {0,20,...,100} for event and rush, {0,5,...,40} for airport.
std::vector<int> default_sweep(Scenario s);
// Throws ModelError for a sweep value outside the scenario's range.
void check_sweep_value(Scenario s, int value);

struct ScenarioParams {
  Scenario scenario = Scenario::Event;
  std::vector<int> sweep;
  int replications = 50;
  std::uint64_t seed = 1;
  double scale = 1.0;
  std::vector<std::string> mechanisms{"stp", "myopic"};
  bool regret = true;
};

// Per-OD aggregates for one simulated economy. Keys are trips (a, b, t) for
// the event scenario; for the others t is -1 and counts are averaged over the
// horizon.
struct OdStats {
  double drivers = 0;    // drivers departing on the OD (with or without a rider)
  double mean_price = 0; // mean charge over transacted trips
  int transacted = 0;
};

struct Metrics {
  Money welfare = 0;  // cents
  double time_efficiency = 0;
  double mean_regret = 0;  // cents, averaged over drivers; 0 when not computed
  bool has_regret = false;
  std::map<Trip, OdStats> od;
};

// welfare from the trace; efficiency is rider-carrying periods over
// on-platform periods, pooled across drivers.
Metrics trace_metrics(const Economy& econ, const Trace& trace, bool per_period_od);

struct Observation {
  int sweep_value = 0;
  int replication = 0;
  std::string mechanism;
  Metrics metrics;
};

struct MetricsTable {
  ScenarioParams params;
  std::vector<Observation> rows;  // ordered by (sweep value, replication, mechanism)
};

// Seed of replication r at sweep value v, derived from the base seed.
std::uint64_t replication_seed(std::uint64_t base, int sweep_value, int replication);

MetricsTable run_batch(const ScenarioParams& params);

struct Summary {
  double mean = 0;
  double std = 0;  // sample standard deviation; 0 when n < 2
  int n = 0;
};
Summary summarize(const std::vector<double>& xs);

inline constexpr int kResultsSchemaVersion = 1;

// Writes <dir>/<scenario>/<metric>.csv for welfare (dollars), efficiency,
// regret (dollars, when computed), drivers_<od> and price_<od> (dollars), and
// manifest.json. Every CSV has the header
// "sweep_value,mechanism,mean,std,n"; a mean with n = 0 is written as "nan".
// Returns the files written.
std::vector<std::filesystem::path> export_results(const MetricsTable& table, const std::filesystem::path& dir);

// One line per (sweep value, mechanism) with mean welfare, efficiency and
// regret.
std::string format_summary(const MetricsTable& table);

}  // namespace stp
