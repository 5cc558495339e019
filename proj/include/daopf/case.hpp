#pragma once

#include <optional>
#include <string>
#include <vector>

namespace daopf {

struct Bus {
  int id = 0;
  double load_fraction = 0.0;  // share of system load, >= 0, fractions sum to 1
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double reactance = 0.0;    // p.u., > 0
  double capacity_mw = 0.0;  // thermal limit, > 0
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double ramp_up_mw = 0.0;    // per interval
  double ramp_down_mw = 0.0;  // per interval
  double cost = 0.0;          // currency/MWh, linear
};

/// Static grid description. Immutable after validation.
struct NetworkCase {
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;

  int bus_index(int bus_id) const;  // -1 when unknown
  int n_buses() const { return static_cast<int>(buses.size()); }
  int n_branches() const { return static_cast<int>(branches.size()); }
  int n_generators() const { return static_cast<int>(generators.size()); }
};

struct HourlyProfile {
  int hours = 0;                       // H
  std::vector<double> system_load_mw;  // per hour, > 0
  std::vector<double> pv_mw;           // per hour, >= 0
  std::optional<int> pv_bus;           // bus id hosting the PV plant
};

/// Field-level invariant checks; throws ValidationError naming the field.
void validate(const NetworkCase& net);

}  // namespace daopf
