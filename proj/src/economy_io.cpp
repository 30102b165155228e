#include "stp/economy_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stp {
namespace {

using Json = nlohmann::ordered_json;

Money money_field(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ModelError(what + " must be an integer amount of money");
  return j.get<Money>();
}

int int_field(const Json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key)) throw ModelError(what + " is missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ModelError(what + "." + key + " must be an integer");
  return v.get<int>();
}

int location_field(const Economy& econ, const Json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw ModelError(what + "." + key + " must be a location name");
  return econ.location_index(obj.at(key).get<std::string>());
}

bool linear_rate(const Economy& econ, Money* rate) {
  const int n = econ.num_locations();
  if (econ.horizon < 1 || n == 0) return false;
  const Money r = econ.cost(0, 0, 0);
  for (int t = 0; t < econ.horizon; ++t)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (t + econ.distance(a, b) <= econ.horizon && econ.cost(a, b, t) != r * econ.distance(a, b))
          return false;
  *rate = r;
  return true;
}

bool linear_exit(const Economy& econ, Money* rate) {
  if (econ.exit_cost.size() < 2) return false;
  const Money r = econ.exit_cost[1];
  for (std::size_t d = 0; d < econ.exit_cost.size(); ++d)
    if (econ.exit_cost[d] != r * static_cast<Money>(d)) return false;
  *rate = r;
  return true;
}

Economy from_json(const Json& doc) {
  if (!doc.is_object()) throw ModelError("economy document must be a JSON object");
  Economy econ;
  econ.horizon = int_field(doc, "horizon", "economy");
  if (econ.horizon < 1) throw ModelError("horizon must be at least 1");
  if (!doc.contains("locations") || !doc.at("locations").is_array())
    throw ModelError("economy.locations must be an array of names");
  for (const auto& name : doc.at("locations")) {
    if (!name.is_string()) throw ModelError("location names must be strings");
    econ.locations.push_back(name.get<std::string>());
  }
  const int n = econ.num_locations();
  if (!doc.contains("dist") || !doc.at("dist").is_array())
    throw ModelError("economy.dist must be a square array");
  for (const auto& row : doc.at("dist")) {
    std::vector<int> r;
    if (!row.is_array()) throw ModelError("economy.dist rows must be arrays");
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw ModelError("distances must be integers");
      r.push_back(v.get<int>());
    }
    econ.dist.push_back(std::move(r));
  }
  if (static_cast<int>(econ.dist.size()) != n) throw ModelError("economy.dist has wrong size");
  for (const auto& r : econ.dist)
    if (static_cast<int>(r.size()) != n) throw ModelError("economy.dist has wrong size");

  econ.set_linear_costs(0, 0);
  const Json& tc = doc.contains("trip_cost") ? doc.at("trip_cost") : Json::object();
  if (tc.contains("per_period")) {
    const Money rate = money_field(tc.at("per_period"), "trip_cost.per_period");
    for (int t = 0; t < econ.horizon; ++t)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          econ.trip_cost[(static_cast<std::size_t>(t) * n + a) * n + b] = rate * econ.dist[a][b];
  } else if (tc.contains("entries")) {
    for (const auto& e : tc.at("entries")) {
      if (!e.is_array() || e.size() != 4 || !e[0].is_string() || !e[1].is_string() ||
          !e[2].is_number_integer())
        throw ModelError("trip_cost entries must be [from, to, time, cost]");
      const int a = econ.location_index(e[0].get<std::string>());
      const int b = econ.location_index(e[1].get<std::string>());
      const int t = e[2].get<int>();
      if (t < 0 || t >= econ.horizon) throw ModelError("trip_cost entry time out of range");
      econ.trip_cost[(static_cast<std::size_t>(t) * n + a) * n + b] =
          money_field(e[3], "trip_cost entry cost");
    }
  }

  if (doc.contains("exit_cost")) {
    const auto& ec = doc.at("exit_cost");
    if (ec.is_array()) {
      econ.exit_cost.clear();
      for (const auto& v : ec) econ.exit_cost.push_back(money_field(v, "exit_cost"));
      if (static_cast<int>(econ.exit_cost.size()) != econ.horizon + 1)
        throw ModelError("exit_cost must list horizon+1 values");
    } else if (ec.is_object() && ec.contains("per_period")) {
      const Money rate = money_field(ec.at("per_period"), "exit_cost.per_period");
      for (int d = 0; d <= econ.horizon; ++d) econ.exit_cost[d] = rate * d;
    } else {
      throw ModelError("exit_cost must be an array or {\"per_period\": k}");
    }
  }

  if (doc.contains("drivers")) {
    int i = 0;
    for (const auto& d : doc.at("drivers")) {
      const std::string what = "drivers[" + std::to_string(i++) + "]";
      DriverType type;
      type.entered = d.value("entered", true);
      type.loc = location_field(econ, d, "location", what);
      type.time = int_field(d, "time", what);
      if (d.contains("exit_time") && int_field(d, "exit_time", what) != econ.horizon)
        throw ModelError(what + ": every driver must stay until the horizon");
      econ.drivers.push_back(type);
    }
  }
  if (doc.contains("riders")) {
    int j = 0;
    for (const auto& r : doc.at("riders")) {
      const std::string what = "riders[" + std::to_string(j++) + "]";
      Rider rider;
      rider.origin = location_field(econ, r, "origin", what);
      rider.dest = location_field(econ, r, "dest", what);
      rider.time = int_field(r, "time", what);
      if (!r.contains("value")) throw ModelError(what + " is missing 'value'");
      rider.value = money_field(r.at("value"), what + ".value");
      if (r.contains("latest_time") && int_field(r, "latest_time", what) != rider.time)
        throw ModelError(what + ": riders must be impatient (latest_time == time)");
      econ.riders.push_back(rider);
    }
  }
  return econ;
}

Json to_json(const Economy& econ) {
  Json doc;
  doc["horizon"] = econ.horizon;
  doc["locations"] = econ.locations;
  doc["dist"] = econ.dist;
  Money rate = 0;
  if (linear_rate(econ, &rate)) {
    doc["trip_cost"] = Json{{"per_period", rate}};
  } else {
    Json entries = Json::array();
    for (const auto& trip : feasible_trips(econ))
      entries.push_back(Json::array({econ.locations[trip.from], econ.locations[trip.to], trip.start,
                                     econ.cost(trip)}));
    doc["trip_cost"] = Json{{"entries", entries}};
  }
  if (linear_exit(econ, &rate))
    doc["exit_cost"] = Json{{"per_period", rate}};
  else
    doc["exit_cost"] = econ.exit_cost;
  Json drivers = Json::array();
  for (const auto& d : econ.drivers)
    drivers.push_back(Json{{"entered", d.entered}, {"location", econ.locations[d.loc]}, {"time", d.time}});
  doc["drivers"] = drivers;
  Json riders = Json::array();
  for (const auto& r : econ.riders)
    riders.push_back(Json{{"origin", econ.locations[r.origin]},
                          {"dest", econ.locations[r.dest]},
                          {"time", r.time},
                          {"value", r.value}});
  doc["riders"] = riders;
  return doc;
}

}  // namespace

Economy parse_economy(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("economy is not valid JSON: ") + e.what());
  }
  Economy econ = from_json(doc);
  require_valid(econ);
  return econ;
}

Economy load_economy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open economy file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_economy(buf.str());
}

std::string dump_economy(const Economy& econ) { return to_json(econ).dump(2) + "\n"; }

void save_economy(const Economy& econ, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path);
  out << dump_economy(econ);
}

}  // namespace stp
