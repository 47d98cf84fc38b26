#pragma once

#include "ascent/solver.hpp"

#include <string>

namespace ascent::io {

/**
 * Load a scenario from a JSON file. Every section is optional and defaults to
 * a GTO reference case (150 km / 5000 m/s / 30 deg / 10000 kg towards a
 * 36000 x 300 km orbit at Isp 300 s), so an empty document "{}" is a complete
 * scenario. Unknown keys anywhere are rejected. Units are suffixed in the key
 * names; altitudes in km and angles in degrees are converted at this boundary
 * and everything downstream is SI.
 *
 * Throws std::runtime_error with a descriptive message on any validation
 * failure.
 */
solver::Scenario load_scenario(const std::string& path);

/** Parse a scenario from JSON text (same schema as load_scenario). */
solver::Scenario parse_scenario(const std::string& json_text);

/** Fully-resolved scenario document with every default materialized. */
std::string echo_scenario(const solver::Scenario& sc);

} // namespace ascent::io
