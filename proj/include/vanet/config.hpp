#pragma once

#include <string>

#include "vanet/sim.hpp"

namespace vanet::config {

// Line-oriented key=value scenario configuration. '#' starts a comment,
// blank lines are skipped, later assignments win. Unknown keys and
// malformed values raise ConfigError naming the key.
//
// Keys use human units (metres, km/h, seconds, Mbit/s); the parsed
// configuration stores exact integer micro-units. render_config writes
// every key such that parse_config recovers the configuration exactly.
sim::ScenarioConfig parse_config(const std::string& text);

sim::ScenarioConfig load_config_file(const std::string& path);

// Applies one key=value assignment (the CLI --set flag).
void apply_assignment(sim::ScenarioConfig& cfg, const std::string& key,
                      const std::string& value);

std::string render_config(const sim::ScenarioConfig& cfg);

}  // namespace vanet::config
