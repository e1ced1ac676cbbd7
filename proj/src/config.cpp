#include "pidtune/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "pidtune/csv.hpp"
#include "pidtune/errors.hpp"

namespace pidtune {

namespace {

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed number for key '" + key + "': '" + text + "'");
  }
}

long parse_long(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed integer for key '" + key + "': '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed unsigned integer for key '" + key + "': '" + text + "'");
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += format_full(values[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parse_coefficient_list(const std::string& text, const std::string& key) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(parse_double(trim(item), key));
  }
  if (values.empty()) {
    throw ConfigError("empty coefficient list for key '" + key + "'");
  }
  return values;
}

TransferFunction AppConfig::plant() const {
  return TransferFunction(Polynomial(plant_num), Polynomial(plant_den));
}

EvoaConfig AppConfig::evoa_config() const {
  EvoaConfig cfg;
  cfg.w_bits = w_bits;
  cfg.population = population;
  cfg.max_iterations = max_iterations;
  cfg.pebble_max = pebble_max.value_or(default_pebble_max(w_bits));
  cfg.rng_seed = rng_seed;
  cfg.ranges = ranges;
  return cfg;
}

ObjectiveConfig AppConfig::objective_config() const {
  ObjectiveConfig cfg;
  cfg.sim = sim;
  cfg.penalty = penalty;
  cfg.objective_kind = objective_kind;
  return cfg;
}

std::optional<PidGains> AppConfig::gains() const {
  if (kp || ki || kd) {
    return PidGains{kp.value_or(0.0), ki.value_or(0.0), kd.value_or(0.0)};
  }
  return std::nullopt;
}

std::string AppConfig::to_key_values() const {
  std::ostringstream out;
  out << "num=" << join(plant_num) << '\n';
  out << "den=" << join(plant_den) << '\n';
  if (kp) out << "kp=" << format_full(*kp) << '\n';
  if (ki) out << "ki=" << format_full(*ki) << '\n';
  if (kd) out << "kd=" << format_full(*kd) << '\n';
  out << "dt=" << format_full(sim.dt) << '\n';
  out << "horizon=" << format_full(sim.horizon) << '\n';
  out << "settling_band=" << format_full(sim.settling_band) << '\n';
  out << "rise_lo=" << format_full(sim.rise_lo) << '\n';
  out << "rise_hi=" << format_full(sim.rise_hi) << '\n';
  out << "w_bits=" << w_bits << '\n';
  out << "population=" << population << '\n';
  out << "max_iterations=" << max_iterations << '\n';
  out << "pebble_max=" << pebble_max.value_or(default_pebble_max(w_bits)) << '\n';
  out << "rng_seed=" << rng_seed << '\n';
  out << "kp_lo=" << format_full(ranges.kp.lo) << '\n';
  out << "kp_hi=" << format_full(ranges.kp.hi) << '\n';
  out << "ki_lo=" << format_full(ranges.ki.lo) << '\n';
  out << "ki_hi=" << format_full(ranges.ki.hi) << '\n';
  out << "kd_lo=" << format_full(ranges.kd.lo) << '\n';
  out << "kd_hi=" << format_full(ranges.kd.hi) << '\n';
  out << "penalty=" << format_full(penalty) << '\n';
  out << "objective=" << (objective_kind == ObjectiveKind::IseOnly ? "ise" : "ise_ts") << '\n';
  out << "runs=" << runs << '\n';
  out << "out_dir=" << out_dir << '\n';
  return out.str();
}

void apply_config_file(AppConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }

  using Setter = std::function<void(AppConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"num", [](AppConfig& c, const std::string& v, const std::string& k) { c.plant_num = parse_coefficient_list(v, k); }},
      {"den", [](AppConfig& c, const std::string& v, const std::string& k) { c.plant_den = parse_coefficient_list(v, k); }},
      {"kp", [](AppConfig& c, const std::string& v, const std::string& k) { c.kp = parse_double(v, k); }},
      {"ki", [](AppConfig& c, const std::string& v, const std::string& k) { c.ki = parse_double(v, k); }},
      {"kd", [](AppConfig& c, const std::string& v, const std::string& k) { c.kd = parse_double(v, k); }},
      {"dt", [](AppConfig& c, const std::string& v, const std::string& k) { c.sim.dt = parse_double(v, k); }},
      {"horizon", [](AppConfig& c, const std::string& v, const std::string& k) { c.sim.horizon = parse_double(v, k); }},
      {"settling_band", [](AppConfig& c, const std::string& v, const std::string& k) { c.sim.settling_band = parse_double(v, k); }},
      {"rise_lo", [](AppConfig& c, const std::string& v, const std::string& k) { c.sim.rise_lo = parse_double(v, k); }},
      {"rise_hi", [](AppConfig& c, const std::string& v, const std::string& k) { c.sim.rise_hi = parse_double(v, k); }},
      {"w_bits", [](AppConfig& c, const std::string& v, const std::string& k) { c.w_bits = static_cast<int>(parse_long(v, k)); }},
      {"population", [](AppConfig& c, const std::string& v, const std::string& k) { c.population = static_cast<int>(parse_long(v, k)); }},
      {"max_iterations", [](AppConfig& c, const std::string& v, const std::string& k) { c.max_iterations = static_cast<int>(parse_long(v, k)); }},
      {"pebble_max", [](AppConfig& c, const std::string& v, const std::string& k) { c.pebble_max = static_cast<int>(parse_long(v, k)); }},
      {"rng_seed", [](AppConfig& c, const std::string& v, const std::string& k) { c.rng_seed = parse_u64(v, k); }},
      {"kp_lo", [](AppConfig& c, const std::string& v, const std::string& k) { c.ranges.kp.lo = parse_double(v, k); }},
      {"kp_hi", [](AppConfig& c, const std::string& v, const std::string& k) { c.ranges.kp.hi = parse_double(v, k); }},
      {"ki_lo", [](AppConfig& c, const std::string& v, const std::string& k) { c.ranges.ki.lo = parse_double(v, k); }},
      {"ki_hi", [](AppConfig& c, const std::string& v, const std::string& k) { c.ranges.ki.hi = parse_double(v, k); }},
      {"kd_lo", [](AppConfig& c, const std::string& v, const std::string& k) { c.ranges.kd.lo = parse_double(v, k); }},
      {"kd_hi", [](AppConfig& c, const std::string& v, const std::string& k) { c.ranges.kd.hi = parse_double(v, k); }},
      {"penalty", [](AppConfig& c, const std::string& v, const std::string& k) { c.penalty = parse_double(v, k); }},
      {"objective",
       [](AppConfig& c, const std::string& v, const std::string& k) {
         if (v == "ise") {
           c.objective_kind = ObjectiveKind::IseOnly;
         } else if (v == "ise_ts") {
           c.objective_kind = ObjectiveKind::IseWithSettlingTiebreak;
         } else {
           throw ConfigError("key '" + k + "' must be 'ise' or 'ise_ts', got '" + v + "'");
         }
       }},
      {"runs", [](AppConfig& c, const std::string& v, const std::string& k) { c.runs = static_cast<int>(parse_long(v, k)); }},
      {"out_dir", [](AppConfig& c, const std::string& v, const std::string&) { c.out_dir = v; }},
  };

  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected key=value, got '" +
                        stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
    try {
      it->second(config, value, key);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_number) + ": " + e.what());
    }
  }
}

void validate(const AppConfig& config) {
  auto fail = [](const std::string& message) { throw ConfigError(message); };

  if (config.plant_den.empty() || Polynomial(config.plant_den).is_zero()) {
    fail("den: plant denominator must not be the zero polynomial");
  }
  if (config.plant_num.empty()) fail("num: plant numerator must not be empty");

  if (!(config.sim.dt > 0.0)) fail("dt: must be positive");
  if (!(config.sim.horizon >= 100.0 * config.sim.dt)) fail("horizon: must be at least 100*dt");
  if (!(config.sim.settling_band > 0.0 && config.sim.settling_band < 0.5)) {
    fail("settling_band: must satisfy 0 < band < 0.5");
  }
  if (!(config.sim.rise_lo > 0.0 && config.sim.rise_lo < config.sim.rise_hi &&
        config.sim.rise_hi < 1.0)) {
    fail("rise_lo/rise_hi: must satisfy 0 < lo < hi < 1");
  }

  if (config.w_bits < 1 || config.w_bits > 32) fail("w_bits: must be in [1, 32]");
  if (config.population < 1) fail("population: must be at least 1");
  if (config.max_iterations < 0) fail("max_iterations: must be non-negative");
  const int pebble = config.pebble_max.value_or(default_pebble_max(config.w_bits));
  if (pebble < 1 || pebble > 3 * config.w_bits) {
    fail("pebble_max: must be in [1, 3*w_bits]");
  }

  auto check_range = [&](const GainRange& r, const std::string& name) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo < 0.0 || !(r.hi > r.lo)) {
      fail(name + ": must satisfy 0 <= lo < hi (finite)");
    }
  };
  check_range(config.ranges.kp, "kp_lo/kp_hi");
  check_range(config.ranges.ki, "ki_lo/ki_hi");
  check_range(config.ranges.kd, "kd_lo/kd_hi");

  if (!(config.penalty > 0.0) || !std::isfinite(config.penalty)) fail("penalty: must be positive");
  if (config.runs < 1) fail("runs: must be at least 1");

  for (double g : {config.kp.value_or(0.0), config.ki.value_or(0.0), config.kd.value_or(0.0)}) {
    if (!std::isfinite(g) || g < 0.0) fail("kp/ki/kd: gains must be finite and non-negative");
  }
}

}  // namespace pidtune
