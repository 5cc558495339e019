#include "daopf/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "daopf/errors.hpp"

namespace daopf {

using nlohmann::json;

int NetworkCase::bus_index(int bus_id) const {
  for (int i = 0; i < n_buses(); ++i)
    if (buses[i].id == bus_id) return i;
  return -1;
}

void validate(const NetworkCase& net) {
  if (net.buses.empty()) throw ValidationError("buses: empty");
  std::unordered_set<int> ids;
  double frac_sum = 0.0;
  for (const auto& bus : net.buses) {
    if (!ids.insert(bus.id).second)
      throw ValidationError("bus id " + std::to_string(bus.id) + " duplicated");
    if (bus.load_fraction < 0.0)
      throw ValidationError("bus " + std::to_string(bus.id) + ": load_fraction negative");
    frac_sum += bus.load_fraction;
  }
  if (std::abs(frac_sum - 1.0) > 1e-9)
    throw ValidationError("load fractions sum to " + std::to_string(frac_sum) + ", expected 1");
  for (const auto& br : net.branches) {
    for (int end : {br.from_bus, br.to_bus})
      if (!ids.count(end))
        throw ValidationError("branch endpoint " + std::to_string(end) + " unknown");
    if (br.reactance <= 0.0)
      throw ValidationError("branch " + std::to_string(br.from_bus) + "-" +
                            std::to_string(br.to_bus) + ": reactance must be > 0");
    if (br.capacity_mw <= 0.0)
      throw ValidationError("branch " + std::to_string(br.from_bus) + "-" +
                            std::to_string(br.to_bus) + ": capacity_mw must be > 0");
  }
  for (const auto& g : net.generators) {
    const std::string tag = "generator " + std::to_string(g.id);
    if (!ids.count(g.bus)) throw ValidationError(tag + ": bus " + std::to_string(g.bus) + " unknown");
    if (g.p_min_mw > g.p_max_mw) throw ValidationError(tag + ": p_min_mw > p_max_mw");
    if (g.ramp_up_mw < 0.0 || g.ramp_down_mw < 0.0)
      throw ValidationError(tag + ": ramp rates must be >= 0");
    if (g.cost < 0.0) throw ValidationError(tag + ": cost must be >= 0");
  }

  // single island
  std::unordered_map<int, std::vector<int>> adj;
  for (const auto& br : net.branches) {
    adj[br.from_bus].push_back(br.to_bus);
    adj[br.to_bus].push_back(br.from_bus);
  }
  std::unordered_set<int> seen;
  std::queue<int> work;
  work.push(net.buses.front().id);
  seen.insert(net.buses.front().id);
  while (!work.empty()) {
    int u = work.front();
    work.pop();
    for (int v : adj[u])
      if (seen.insert(v).second) work.push(v);
  }
  if (seen.size() != net.buses.size())
    throw ValidationError("network is not a single connected island (" +
                          std::to_string(seen.size()) + "/" + std::to_string(net.buses.size()) +
                          " buses reachable)");
}

namespace {

double get_num(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
  if (!j[key].is_number()) throw ParseError(ctx + ": field '" + key + "' is not a number");
  return j[key].get<double>();
}

}  // namespace

NetworkCase parse_case(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("case file is not valid JSON: ") + e.what());
  }
  NetworkCase net;
  net.name = j.value("name", "");
  net.base_mva = j.value("base_mva", 100.0);
  if (!j.contains("buses") || !j["buses"].is_array()) throw ParseError("missing 'buses' array");
  if (!j.contains("branches") || !j["branches"].is_array())
    throw ParseError("missing 'branches' array");
  if (!j.contains("generators") || !j["generators"].is_array())
    throw ParseError("missing 'generators' array");

  for (const auto& bj : j["buses"]) {
    Bus b;
    b.id = static_cast<int>(get_num(bj, "id", "bus"));
    b.load_fraction = bj.value("load_fraction", 0.0);
    net.buses.push_back(b);
  }
  for (const auto& bj : j["branches"]) {
    Branch br;
    br.from_bus = static_cast<int>(get_num(bj, "from_bus", "branch"));
    br.to_bus = static_cast<int>(get_num(bj, "to_bus", "branch"));
    br.reactance = get_num(bj, "reactance", "branch");
    br.capacity_mw = get_num(bj, "capacity_mw", "branch");
    net.branches.push_back(br);
  }
  for (const auto& gj : j["generators"]) {
    Generator g;
    g.id = static_cast<int>(get_num(gj, "id", "generator"));
    g.bus = static_cast<int>(get_num(gj, "bus", "generator"));
    g.p_min_mw = get_num(gj, "p_min_mw", "generator");
    g.p_max_mw = get_num(gj, "p_max_mw", "generator");
    g.ramp_up_mw = get_num(gj, "ramp_up_mw", "generator");
    g.ramp_down_mw = get_num(gj, "ramp_down_mw", "generator");
    g.cost = get_num(gj, "cost", "generator");
    net.generators.push_back(g);
  }
  validate(net);
  return net;
}

NetworkCase load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str());
}

std::string serialize_case(const NetworkCase& net) {
  json j;
  j["name"] = net.name;
  j["base_mva"] = net.base_mva;
  j["buses"] = json::array();
  for (const auto& b : net.buses)
    j["buses"].push_back({{"id", b.id}, {"load_fraction", b.load_fraction}});
  j["branches"] = json::array();
  for (const auto& br : net.branches)
    j["branches"].push_back({{"from_bus", br.from_bus},
                             {"to_bus", br.to_bus},
                             {"reactance", br.reactance},
                             {"capacity_mw", br.capacity_mw}});
  j["generators"] = json::array();
  for (const auto& g : net.generators)
    j["generators"].push_back({{"id", g.id},
                               {"bus", g.bus},
                               {"p_min_mw", g.p_min_mw},
                               {"p_max_mw", g.p_max_mw},
                               {"ramp_up_mw", g.ramp_up_mw},
                               {"ramp_down_mw", g.ramp_down_mw},
                               {"cost", g.cost}});
  return j.dump(2);
}

HourlyProfile parse_profile(const std::string& csv_text, const NetworkCase& net,
                            int expected_hours, int pv_bus) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("profile: empty file");
  // tolerate \r\n
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
  };
  if (strip(line) != "hour,system_load_mw,pv_mw")
    throw ParseError("profile: expected header 'hour,system_load_mw,pv_mw', got '" + line + "'");

  HourlyProfile prof;
  int expect = 1;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double vals[3];
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(row, cell, ','))
        throw ParseError("profile row " + std::to_string(expect) + ": expected 3 columns");
      try {
        vals[i] = std::stod(cell);
      } catch (...) {
        throw ParseError("profile row " + std::to_string(expect) + ": non-numeric cell '" + cell +
                         "'");
      }
    }
    if (static_cast<int>(vals[0]) != expect)
      throw ParseError("profile: hour column must be 1-based and contiguous, got " + cell);
    if (vals[1] <= 0.0)
      throw ValidationError("profile hour " + std::to_string(expect) + ": system_load_mw <= 0");
    if (vals[2] < 0.0)
      throw ValidationError("profile hour " + std::to_string(expect) + ": pv_mw < 0");
    prof.system_load_mw.push_back(vals[1]);
    prof.pv_mw.push_back(vals[2]);
    ++expect;
  }
  prof.hours = static_cast<int>(prof.system_load_mw.size());
  if (prof.hours == 0) throw ParseError("profile: no data rows");
  if (expected_hours > 0 && prof.hours != expected_hours)
    throw ParseError("profile: declared H=" + std::to_string(expected_hours) + " but file has " +
                     std::to_string(prof.hours) + " rows");
  if (pv_bus >= 0) {
    if (net.bus_index(pv_bus) < 0)
      throw ValidationError("pv bus " + std::to_string(pv_bus) + " unknown");
    prof.pv_bus = pv_bus;
  }
  return prof;
}

HourlyProfile load_profile(const std::string& path, const NetworkCase& net, int expected_hours,
                           int pv_bus) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str(), net, expected_hours, pv_bus);
}

std::vector<double> bus_loads(const NetworkCase& net, double system_load_mw) {
  std::vector<double> loads(net.buses.size());
  for (size_t i = 0; i < net.buses.size(); ++i)
    loads[i] = system_load_mw * net.buses[i].load_fraction;
  return loads;
}

}  // namespace daopf
