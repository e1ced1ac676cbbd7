#pragma once

#include <optional>
#include <vector>

#include "pidtune/state_space.hpp"

namespace pidtune {

/// Fixed-step integration settings and metric conventions.
struct SimConfig {
  double dt = 0.01;            // seconds
  double horizon = 600.0;      // seconds
  double settling_band = 0.02; // fraction of the final value
  double rise_lo = 0.10;       // rise-time crossing fractions
  double rise_hi = 0.90;
};

void validate(const SimConfig& config);

/// Unit-step response sampled on a uniform grid.
struct StepResponse {
  std::vector<double> times;
  std::vector<double> outputs;
  double setpoint = 1.0;
};

struct ResponseMetrics {
  double ise = 0.0;
  std::optional<double> settling_time;  // absent if the response never settles
  double overshoot_pct = 0.0;
  std::optional<double> rise_time;      // absent if the response never rises through the bounds
  double final_value = 0.0;
};

/// Classic fourth-order fixed-step integration of dx/dt = A x + B u with
/// u(t) = 1 for t >= 0 and x(0) = 0, sampled every dt from 0 to horizon.
/// Throws SimulationDiverged when the state stops being finite.
StepResponse simulate_step(const StateSpaceModel& model, const SimConfig& config);

/// ISE of the same trajectory simulate_step produces, accumulated on the fly
/// without materializing the series. Bit-identical to
/// compute_ise(simulate_step(model, config)).
double simulate_step_ise(const StateSpaceModel& model, const SimConfig& config);

/// Trapezoidal quadrature of (setpoint - output)^2 over the sampled horizon.
double compute_ise(const StepResponse& resp);

/// Settling time, overshoot, rise time and final value. When the closed-loop
/// dc gain is known it anchors the final value; otherwise the mean of the
/// last 5% of samples is used. Throws DomainError when the final value is
/// zero, which leaves overshoot undefined.
ResponseMetrics compute_metrics(const StepResponse& resp, const SimConfig& config,
                                std::optional<double> dc_gain = std::nullopt);

}  // namespace pidtune
