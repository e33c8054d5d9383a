#include "vanet/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vanet/errors.hpp"

namespace vanet::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + value + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + value + "'");
  }
}

std::int64_t scaled(const std::string& key, const std::string& value,
                    double factor) {
  return static_cast<std::int64_t>(
      std::llround(parse_double(key, value) * factor));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct KeyBinding {
  std::function<void(sim::ScenarioConfig&, const std::string&,
                     const std::string&)> set;
  std::function<std::string(const sim::ScenarioConfig&)> get;
};

// Canonical key order; render emits in this order.
const std::vector<std::pair<std::string, KeyBinding>>& bindings() {
  using Cfg = sim::ScenarioConfig;
  static const std::vector<std::pair<std::string, KeyBinding>> table = {
      {"protocol",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          if (v == "cooperative")
            c.protocol = sim::Protocol::cooperative;
          else if (v == "baseline")
            c.protocol = sim::Protocol::baseline;
          else
            throw ConfigError("bad value for " + k +
                              " (want cooperative|baseline): '" + v + "'");
        },
        [](const Cfg& c) {
          return c.protocol == sim::Protocol::cooperative
                     ? std::string("cooperative")
                     : std::string("baseline");
        }}},
      {"vehicle_count",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.vehicle_count = static_cast<int>(parse_int(k, v));
        },
        [](const Cfg& c) { return std::to_string(c.vehicle_count); }}},
      {"area_m",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.area_um = scaled(k, v, 1e6);
        },
        [](const Cfg& c) { return format_double(c.area_um / 1e6); }}},
      {"grid_spacing_m",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.grid_spacing_um = scaled(k, v, 1e6);
        },
        [](const Cfg& c) { return format_double(c.grid_spacing_um / 1e6); }}},
      {"coverage_radius_m",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.coverage_radius_um = scaled(k, v, 1e6);
        },
        [](const Cfg& c) {
          return format_double(c.coverage_radius_um / 1e6);
        }}},
      {"speed_min_kmh",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.speed_min_umps = scaled(k, v, 1e9 / 3600.0);
        },
        [](const Cfg& c) {
          return format_double(c.speed_min_umps * 3600.0 / 1e9);
        }}},
      {"speed_max_kmh",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.speed_max_umps = scaled(k, v, 1e9 / 3600.0);
        },
        [](const Cfg& c) {
          return format_double(c.speed_max_umps * 3600.0 / 1e9);
        }}},
      {"bandwidth_mbps",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.bandwidth_bps = scaled(k, v, 1e6);
        },
        [](const Cfg& c) { return format_double(c.bandwidth_bps / 1e6); }}},
      {"beacon_period_s",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.beacon_period = scaled(k, v, 1e9);
        },
        [](const Cfg& c) { return format_double(to_seconds(c.beacon_period)); }}},
      {"duration_s",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.duration = scaled(k, v, 1e9);
        },
        [](const Cfg& c) { return format_double(to_seconds(c.duration)); }}},
      {"verify_cost_ms",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.verify_cost = scaled(k, v, 1e6);
        },
        [](const Cfg& c) { return format_double(to_millis(c.verify_cost)); }}},
      {"sign_cost_ms",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.sign_cost = scaled(k, v, 1e6);
        },
        [](const Cfg& c) { return format_double(to_millis(c.sign_cost)); }}},
      {"rx_buffer_capacity",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.rx_buffer_capacity = static_cast<int>(parse_int(k, v));
        },
        [](const Cfg& c) { return std::to_string(c.rx_buffer_capacity); }}},
      {"p",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.obu.p = static_cast<int>(parse_int(k, v));
        },
        [](const Cfg& c) { return std::to_string(c.obu.p); }}},
      {"delta_t_ms",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.obu.delta_t = scaled(k, v, 1e6);
        },
        [](const Cfg& c) { return format_double(to_millis(c.obu.delta_t)); }}},
      {"theta_s",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.obu.theta = scaled(k, v, 1e9);
        },
        [](const Cfg& c) { return format_double(to_seconds(c.obu.theta)); }}},
      {"neighbor_timeout_s",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.obu.neighbor_timeout = scaled(k, v, 1e9);
        },
        [](const Cfg& c) {
          return format_double(to_seconds(c.obu.neighbor_timeout));
        }}},
      {"election",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          if (v == "p_nearest")
            c.obu.election = obu::ElectionStrategy::p_nearest;
          else if (v == "paper_rule")
            c.obu.election = obu::ElectionStrategy::paper_rule;
          else
            throw ConfigError("bad value for " + k +
                              " (want p_nearest|paper_rule): '" + v + "'");
        },
        [](const Cfg& c) {
          return c.obu.election == obu::ElectionStrategy::p_nearest
                     ? std::string("p_nearest")
                     : std::string("paper_rule");
        }}},
      {"cert_lifetime_s",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.cert_lifetime = scaled(k, v, 1e9);
        },
        [](const Cfg& c) { return format_double(to_seconds(c.cert_lifetime)); }}},
      {"release_delay_s",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.release_delay_max = scaled(k, v, 1e9);
        },
        [](const Cfg& c) {
          return format_double(to_seconds(c.release_delay_max));
        }}},
      {"crypto",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          if (v == "prf")
            c.scheme = crypto::Scheme::prf;
          else if (v == "ed25519")
            c.scheme = crypto::Scheme::ed25519;
          else
            throw ConfigError("bad value for " + k +
                              " (want prf|ed25519): '" + v + "'");
        },
        [](const Cfg& c) {
          return c.scheme == crypto::Scheme::prf ? std::string("prf")
                                                 : std::string("ed25519");
        }}},
      {"seed",
       {[](Cfg& c, const std::string& k, const std::string& v) {
          c.seed = parse_uint(k, v);
        },
        [](const Cfg& c) { return std::to_string(c.seed); }}},
  };
  return table;
}

}  // namespace

void apply_assignment(sim::ScenarioConfig& cfg, const std::string& key,
                      const std::string& value) {
  for (const auto& [name, binding] : bindings()) {
    if (name == key) {
      binding.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key: '" + key + "'");
}

sim::ScenarioConfig parse_config(const std::string& text) {
  sim::ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value, got '" + line + "'");
    apply_assignment(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

sim::ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const sim::ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [name, binding] : bindings()) {
    out += name;
    out += " = ";
    out += binding.get(cfg);
    out += "\n";
  }
  return out;
}

}  // namespace vanet::config
