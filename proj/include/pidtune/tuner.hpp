#pragma once

#include <optional>
#include <vector>

#include "pidtune/evoa.hpp"
#include "pidtune/sim.hpp"
#include "pidtune/zn.hpp"

namespace pidtune {

enum class ObjectiveKind { IseOnly, IseWithSettlingTiebreak };

/// Fitness-side configuration. Unstable or diverging candidates score
/// penalty plus an ordering term so the search can climb out of the
/// infeasible region.
struct ObjectiveConfig {
  SimConfig sim;
  double penalty = 1e9;
  ObjectiveKind objective_kind = ObjectiveKind::IseOnly;
};

void validate(const ObjectiveConfig& config);

struct TuningReport {
  UltimateParams ultimate;
  PidGains zn_gains;
  ResponseMetrics zn_metrics;
  PidGains best_gains;
  ResponseMetrics best_metrics;
  std::vector<double> history;  // best objective value per iteration, [0] = initial population
  EvoaConfig evoa_config;
  ObjectiveConfig objective_config;
  bool seed_clamped = false;
  std::uint64_t evaluations = 0;
};

struct RunStatistics {
  int runs = 0;
  std::vector<double> best_values;
  double mean = 0.0;
  std::optional<double> std_dev;  // absent for fewer than two runs
};

/// Closed-loop ISE of the candidate gains on the plant; total by design:
/// Routh-unstable loops and diverging simulations score the penalty, with
/// 1e6 per right-half-plane sign change on top to order infeasible
/// candidates.
double pid_objective(const PidGains& gains, const TransferFunction& plant,
                     const ObjectiveConfig& config);

/// The full pipeline: baseline gains (computed via find_ultimate/zn_gains
/// unless literal seed gains are supplied), seeded search, metrics for both
/// gain sets. Seed gains are clamped into the configured ranges before
/// encoding.
TuningReport tune(const TransferFunction& plant, const EvoaConfig& evoa_config,
                  const ObjectiveConfig& objective_config,
                  std::optional<PidGains> seed_gains = std::nullopt);

/// Mean and sample standard deviation (M-1 divisor) of per-run best values.
RunStatistics run_statistics(const std::vector<double>& best_values);

}  // namespace pidtune
