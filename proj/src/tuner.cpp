#include "pidtune/tuner.hpp"

#include <cmath>
#include <stdexcept>

#include "pidtune/errors.hpp"
#include "pidtune/routh.hpp"

namespace pidtune {

namespace {

constexpr double kInfeasibleOrderingWeight = 1e6;
// Bounded-domain encoding of the lexicographic (ISE, settling-time)
// objective: the weight is far below any meaningful ISE difference, so it
// only orders candidates whose ISE ties.
constexpr double kSettlingTiebreakWeight = 1e-12;

ResponseMetrics loop_metrics(const TransferFunction& plant, const PidGains& gains,
                             const SimConfig& sim) {
  const TransferFunction loop = closed_loop(plant, pid_transfer_function(gains));
  const StepResponse resp = simulate_step(to_state_space(loop), sim);
  return compute_metrics(resp, sim, dc_gain(loop));
}

PidGains clamp_to_ranges(const PidGains& gains, const GainRanges& ranges, bool* clamped) {
  auto clamp_one = [&](double v, const GainRange& r) {
    if (v < r.lo) {
      if (clamped) *clamped = true;
      return r.lo;
    }
    if (v > r.hi) {
      if (clamped) *clamped = true;
      return r.hi;
    }
    return v;
  };
  return PidGains{clamp_one(gains.kp, ranges.kp), clamp_one(gains.ki, ranges.ki),
                  clamp_one(gains.kd, ranges.kd)};
}

}  // namespace

void validate(const ObjectiveConfig& config) {
  validate(config.sim);
  if (!(config.penalty > 0.0) || !std::isfinite(config.penalty)) {
    throw std::invalid_argument("objective: penalty must be positive and finite");
  }
}

double pid_objective(const PidGains& gains, const TransferFunction& plant,
                     const ObjectiveConfig& config) {
  const TransferFunction loop = closed_loop(plant, pid_transfer_function(gains));
  const RouthAnalysis analysis = routh_analyze(loop.den);
  if (analysis.verdict == Stability::Unstable) {
    return config.penalty + kInfeasibleOrderingWeight * analysis.sign_changes;
  }
  try {
    const StateSpaceModel model = to_state_space(loop);
    double value;
    if (config.objective_kind == ObjectiveKind::IseOnly) {
      value = simulate_step_ise(model, config.sim);
    } else {
      const StepResponse resp = simulate_step(model, config.sim);
      const ResponseMetrics metrics = compute_metrics(resp, config.sim, dc_gain(loop));
      value = metrics.ise +
              kSettlingTiebreakWeight * metrics.settling_time.value_or(config.sim.horizon);
    }
    if (!std::isfinite(value)) return config.penalty;
    return value;
  } catch (const SimulationDiverged&) {
    return config.penalty;
  } catch (const DomainError&) {
    // e.g. zero final value in the tiebreak path
    return config.penalty;
  }
}

TuningReport tune(const TransferFunction& plant, const EvoaConfig& evoa_config,
                  const ObjectiveConfig& objective_config, std::optional<PidGains> seed_gains) {
  validate(evoa_config);
  validate(objective_config);

  TuningReport report;
  report.evoa_config = evoa_config;
  report.objective_config = objective_config;

  if (seed_gains) {
    validate(*seed_gains);
    report.zn_gains = *seed_gains;
    // The ultimate parameters are still part of the report when available.
    try {
      report.ultimate = find_ultimate(plant);
    } catch (const DomainError&) {
      report.ultimate = UltimateParams{};
    }
  } else {
    report.ultimate = find_ultimate(plant);
    report.zn_gains = zn_gains(report.ultimate, ControlType::PID);
  }

  const PidGains seed = clamp_to_ranges(report.zn_gains, evoa_config.ranges, &report.seed_clamped);
  const Genome seed_genome = encode(seed, evoa_config.ranges, evoa_config.w_bits);

  const auto fitness = [&](const Genome& genome) {
    return pid_objective(decode(genome, evoa_config.ranges, evoa_config.w_bits), plant,
                         objective_config);
  };
  OptimizeResult search = optimize(evoa_config, seed_genome, fitness);

  report.best_gains = decode(search.best.genome, evoa_config.ranges, evoa_config.w_bits);
  report.history = std::move(search.history);
  report.evaluations = search.evaluations;
  report.zn_metrics = loop_metrics(plant, report.zn_gains, objective_config.sim);
  report.best_metrics = loop_metrics(plant, report.best_gains, objective_config.sim);
  return report;
}

RunStatistics run_statistics(const std::vector<double>& best_values) {
  if (best_values.empty()) {
    throw std::invalid_argument("run_statistics: at least one value required");
  }
  RunStatistics stats;
  stats.runs = static_cast<int>(best_values.size());
  stats.best_values = best_values;

  double sum = 0.0;
  for (double v : best_values) sum += v;
  stats.mean = sum / static_cast<double>(best_values.size());

  if (best_values.size() >= 2) {
    double acc = 0.0;
    for (double v : best_values) {
      const double d = v - stats.mean;
      acc += d * d;
    }
    stats.std_dev = std::sqrt(acc / static_cast<double>(best_values.size() - 1));
  }
  return stats;
}

}  // namespace pidtune
