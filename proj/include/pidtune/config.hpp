#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pidtune/tuner.hpp"

namespace pidtune {

/// Effective tool configuration, merged defaults < config file < flags.
struct AppConfig {
  std::vector<double> plant_num{1.0};
  std::vector<double> plant_den{64.0, 9.6, 0.48, 0.008};

  std::optional<double> kp;
  std::optional<double> ki;
  std::optional<double> kd;

  SimConfig sim;

  int w_bits = 16;
  int population = 20;
  int max_iterations = 200;
  std::optional<int> pebble_max;  // resolved from w_bits when unset
  std::uint64_t rng_seed = 1;
  GainRanges ranges;

  double penalty = 1e9;
  ObjectiveKind objective_kind = ObjectiveKind::IseOnly;

  int runs = 1;
  std::string out_dir = ".";

  TransferFunction plant() const;
  EvoaConfig evoa_config() const;
  ObjectiveConfig objective_config() const;
  std::optional<PidGains> gains() const;

  /// Flat key=value form, reusable as a config file.
  std::string to_key_values() const;
};

/// Apply `key=value` lines from a flat config file. Unknown keys, malformed
/// numbers and violated invariants raise ConfigError naming the key and
/// line.
void apply_config_file(AppConfig& config, const std::filesystem::path& path);

/// Invariant check over the merged configuration; raises ConfigError naming
/// the offending key.
void validate(const AppConfig& config);

std::vector<double> parse_coefficient_list(const std::string& text, const std::string& key);

}  // namespace pidtune
