#pragma once

#include <string>

#include "cbond/scenario.hpp"

namespace cbond {

// Scenario files are JSON. Durations are in microseconds, sizes in bits,
// loads in Mbit/s; the structs use SI units, conversion happens here.
// Parsing is strict: unknown keys are rejected so typos fail loudly, and
// validate() runs on the result before it is returned.
network_scenario parse_scenario_text(const std::string& text);
network_scenario parse_scenario(const std::string& path);

// Canonical form: keys in schema order, microsecond units, adjacency by wlan
// id. parse(serialize(parse(f))) == parse(f) for every valid f.
std::string serialize_scenario(const network_scenario& s);
void write_scenario(const network_scenario& s, const std::string& path);

}  // namespace cbond
