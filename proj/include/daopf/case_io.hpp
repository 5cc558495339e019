#pragma once

#include <string>

#include "daopf/case.hpp"

namespace daopf {

NetworkCase load_case(const std::string& path);
NetworkCase parse_case(const std::string& json_text);
std::string serialize_case(const NetworkCase& net);

/// CSV with header `hour,system_load_mw,pv_mw`, hour 1-based and contiguous.
/// `expected_hours` = 0 accepts any positive row count.
HourlyProfile load_profile(const std::string& path, const NetworkCase& net,
                           int expected_hours = 24, int pv_bus = -1);
HourlyProfile parse_profile(const std::string& csv_text, const NetworkCase& net,
                            int expected_hours = 24, int pv_bus = -1);

/// Per-bus loads for one hour: system_load * load_fraction, PV netted separately.
std::vector<double> bus_loads(const NetworkCase& net, double system_load_mw);

}  // namespace daopf
