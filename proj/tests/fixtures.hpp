#pragma once

#include <string>

#include "daopf/case_io.hpp"
#include "daopf/dcopf.hpp"

namespace fixtures {

inline std::string data_dir() { return DAOPF_DATA_DIR; }

inline daopf::NetworkCase ieee30() { return daopf::load_case(data_dir() + "/ieee30.json"); }

inline daopf::HourlyProfile ieee30_profile(const daopf::NetworkCase& net, int pv_bus = 5) {
  return daopf::load_profile(data_dir() + "/profile24.csv", net, 24, pv_bus);
}

// gen (cost 10) at bus 1, 100 MW load at bus 2, one line X=0.1 cap 200
inline daopf::NetworkCase two_bus(double load_cap = 200.0) {
  daopf::NetworkCase net;
  net.name = "two-bus";
  net.buses = {{1, 0.0}, {2, 1.0}};
  net.branches = {{1, 2, 0.1, load_cap}};
  net.generators = {{1, 1, 0.0, 300.0, 300.0, 300.0, 10.0}};
  return net;
}

inline daopf::HourlyDcopfInstance two_bus_hour(const daopf::NetworkCase& net,
                                               double load_mw = 100.0) {
  return daopf::make_instance(net, 1, load_mw, 0.0, -1, std::nullopt);
}

// three buses in a triangle with a cheap remote generator behind a tight
// line; congests for loads above the corridor capacity
inline daopf::NetworkCase three_bus_congested() {
  daopf::NetworkCase net;
  net.name = "three-bus";
  net.buses = {{1, 0.0}, {2, 0.0}, {3, 1.0}};
  net.branches = {{1, 3, 0.1, 40.0}, {1, 2, 0.1, 500.0}, {2, 3, 0.1, 500.0}};
  net.generators = {{1, 1, 0.0, 500.0, 500.0, 500.0, 5.0},
                    {2, 2, 0.0, 500.0, 500.0, 500.0, 20.0}};
  return net;
}

}  // namespace fixtures
