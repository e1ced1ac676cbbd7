#include "pidtune/zn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pidtune/errors.hpp"
#include "pidtune/routh.hpp"

namespace pidtune {

namespace {

constexpr double kGainCap = 1e6;
// Tight enough that the located gain is well inside the 1e-9-relative
// marginal window of the Routh verdict at that gain.
constexpr double kBracketTolerance = 1e-12;

Polynomial loop_denominator(const TransferFunction& plant, double gain) {
  return plant.den + gain * plant.num;
}

// Unwrapped phase of plant(j*omega) relative to a reference phase at the
// previous sweep point.
double wrapped_delta(double phase, double reference) {
  double delta = phase - reference;
  while (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
  while (delta < -std::numbers::pi) delta += 2.0 * std::numbers::pi;
  return delta;
}

// Frequency of the -180 degree phase crossing, found by a log sweep with
// phase unwrapping followed by bisection inside the bracketing segment.
std::optional<double> phase_crossing_frequency(const TransferFunction& plant) {
  constexpr double kOmegaLo = 1e-6;
  constexpr double kOmegaHi = 1e6;
  constexpr int kSweepPoints = 2400;
  const double target = -std::numbers::pi;

  auto raw_phase = [&](double omega) { return std::arg(frequency_response(plant, omega)); };

  double omega_prev = kOmegaLo;
  double unwrapped_prev = raw_phase(omega_prev);
  const double log_lo = std::log(kOmegaLo);
  const double log_hi = std::log(kOmegaHi);
  for (int i = 1; i <= kSweepPoints; ++i) {
    const double omega = std::exp(log_lo + (log_hi - log_lo) * i / kSweepPoints);
    const double unwrapped = unwrapped_prev + wrapped_delta(raw_phase(omega), unwrapped_prev);
    if (unwrapped_prev > target && unwrapped <= target) {
      double lo = omega_prev, hi = omega;
      double phase_lo = unwrapped_prev;
      for (int iter = 0; iter < 200 && (hi - lo) > 1e-14 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double phase_mid = phase_lo + wrapped_delta(raw_phase(mid), phase_lo);
        if (phase_mid > target) {
          lo = mid;
          phase_lo = phase_mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    omega_prev = omega;
    unwrapped_prev = unwrapped;
  }
  return std::nullopt;
}

}  // namespace

UltimateParams find_ultimate(const TransferFunction& plant) {
  if (!is_strictly_proper(plant)) {
    throw DomainError("find_ultimate: plant must be strictly proper");
  }
  if (routh_stable(plant.den) != Stability::Stable) {
    throw DomainError("find_ultimate: plant is not open-loop stable");
  }

  auto verdict_at = [&](double gain) { return routh_stable(loop_denominator(plant, gain)); };

  // Expand the unstable bracket by doubling, then bisect to the boundary.
  // The verdict-level marginal window is ~1e-9 of the first-column scale,
  // too coarse for the gain itself, so the bisection decides sides through
  // the signed Routh margin and runs well past that window.
  double lo = 0.0;
  double hi = 1.0;
  for (;;) {
    const Stability v = verdict_at(hi);
    if (v != Stability::Stable) break;
    lo = hi;
    hi *= 2.0;
    if (hi > kGainCap) {
      throw DomainError("find_ultimate: no ultimate gain below cap (phase never crosses -180 degrees)");
    }
  }
  while (hi - lo > kBracketTolerance * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double margin = routh_boundary_margin(loop_denominator(plant, mid));
    if (margin == 0.0) {
      lo = hi = mid;
      break;
    }
    (margin > 0.0 ? lo : hi) = mid;
  }
  const double ku = 0.5 * (lo + hi);

  // Oscillation frequency: auxiliary Routh polynomial at the boundary,
  // cross-checked against the -180 degree crossing of the plant phase.
  const RouthAnalysis analysis = routh_analyze(loop_denominator(plant, ku));
  const auto sweep = phase_crossing_frequency(plant);

  double omega = 0.0;
  if (!analysis.imaginary_crossings.empty()) {
    omega = analysis.imaginary_crossings.front();
    if (sweep) {
      for (double candidate : analysis.imaginary_crossings) {
        if (std::abs(candidate - *sweep) < std::abs(omega - *sweep)) omega = candidate;
      }
      if (omega > 0.0 && std::abs(omega - *sweep) > 5e-3 * omega) {
        throw DomainError("find_ultimate: Routh and frequency-sweep crossings disagree");
      }
    }
  } else if (sweep) {
    omega = *sweep;
  }
  if (!(omega > 0.0)) {
    throw DomainError("find_ultimate: no oscillation frequency at the stability boundary");
  }

  return UltimateParams{ku, 2.0 * std::numbers::pi / omega};
}

PidGains zn_gains(const UltimateParams& ultimate, ControlType control_type) {
  if (!(ultimate.ku > 0.0) || !(ultimate.tu > 0.0)) {
    throw std::invalid_argument("zn_gains: ultimate parameters must be positive");
  }
  const double ku = ultimate.ku;
  const double tu = ultimate.tu;
  switch (control_type) {
    case ControlType::P:
      return PidGains{0.50 * ku, 0.0, 0.0};
    case ControlType::PI:
      return PidGains{0.45 * ku, 0.54 * ku / tu, 0.0};
    case ControlType::PID:
      return PidGains{0.60 * ku, 1.2 * ku / tu, 3.0 * ku * tu / 40.0};
  }
  throw std::invalid_argument("zn_gains: unknown control type");
}

}  // namespace pidtune
