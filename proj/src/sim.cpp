#include "pidtune/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "pidtune/errors.hpp"

namespace pidtune {

namespace {

// Flattened RK4 stepper for dx/dt = A x + b with the unit step input folded
// into b = B*1. Row-major A keeps the inner loops contiguous; the objective
// evaluates this millions of times.
class Rk4Core {
 public:
  explicit Rk4Core(const StateSpaceModel& model)
      : n_(static_cast<std::size_t>(model.order())),
        a_(n_ * n_),
        b_(n_),
        c_(n_),
        d_(model.D),
        x_(n_, 0.0),
        k1_(n_),
        k2_(n_),
        k3_(n_),
        k4_(n_),
        xt_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        a_[i * n_ + j] = model.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      b_[i] = model.B(static_cast<Eigen::Index>(i));
      c_[i] = model.C(static_cast<Eigen::Index>(i));
    }
  }

  double output() const {
    double y = d_;
    for (std::size_t i = 0; i < n_; ++i) y += c_[i] * x_[i];
    return y;
  }

  bool state_finite() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(x_[i])) return false;
    }
    return true;
  }

  void step(double h) {
    derivative(x_.data(), k1_.data());
    shifted(h / 2.0, k1_.data());
    derivative(xt_.data(), k2_.data());
    shifted(h / 2.0, k2_.data());
    derivative(xt_.data(), k3_.data());
    shifted(h, k3_.data());
    derivative(xt_.data(), k4_.data());
    for (std::size_t i = 0; i < n_; ++i) {
      x_[i] += (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
  }

 private:
  void derivative(const double* x, double* dx) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = b_[i];
      const double* row = &a_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) acc += row[j] * x[j];
      dx[i] = acc;
    }
  }

  void shifted(double scale, const double* k) {
    for (std::size_t i = 0; i < n_; ++i) xt_[i] = x_[i] + scale * k[i];
  }

  std::size_t n_;
  std::vector<double> a_, b_, c_;
  double d_;
  std::vector<double> x_;
  std::vector<double> k1_, k2_, k3_, k4_, xt_;
};

std::size_t sample_count(const SimConfig& config) {
  return static_cast<std::size_t>(std::llround(config.horizon / config.dt));
}

}  // namespace

void validate(const SimConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw std::invalid_argument("sim: dt must be positive");
  }
  if (!(config.horizon >= 100.0 * config.dt) || !std::isfinite(config.horizon)) {
    throw std::invalid_argument("sim: horizon must be at least 100*dt");
  }
  if (!(config.settling_band > 0.0 && config.settling_band < 0.5)) {
    throw std::invalid_argument("sim: settling_band must satisfy 0 < band < 0.5");
  }
  if (!(config.rise_lo > 0.0 && config.rise_lo < config.rise_hi && config.rise_hi < 1.0)) {
    throw std::invalid_argument("sim: rise bounds must satisfy 0 < lo < hi < 1");
  }
}

StepResponse simulate_step(const StateSpaceModel& model, const SimConfig& config) {
  validate(config);
  const std::size_t steps = sample_count(config);

  StepResponse resp;
  resp.setpoint = 1.0;
  resp.times.reserve(steps + 1);
  resp.outputs.reserve(steps + 1);

  Rk4Core core(model);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * config.dt;
    const double y = core.output();
    if (!std::isfinite(y) || !core.state_finite()) {
      throw SimulationDiverged(t);
    }
    resp.times.push_back(t);
    resp.outputs.push_back(y);
    if (i < steps) core.step(config.dt);
  }
  return resp;
}

double simulate_step_ise(const StateSpaceModel& model, const SimConfig& config) {
  validate(config);
  const std::size_t steps = sample_count(config);

  Rk4Core core(model);
  double ise = 0.0;
  double prev_t = 0.0;
  double prev_sq = 0.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * config.dt;
    const double y = core.output();
    if (!std::isfinite(y) || !core.state_finite()) {
      throw SimulationDiverged(t);
    }
    const double err = 1.0 - y;
    const double sq = err * err;
    if (i > 0) ise += 0.5 * (prev_sq + sq) * (t - prev_t);
    prev_t = t;
    prev_sq = sq;
    if (i < steps) core.step(config.dt);
  }
  return ise;
}

double compute_ise(const StepResponse& resp) {
  if (resp.times.empty()) {
    throw std::invalid_argument("compute_ise: empty response");
  }
  double ise = 0.0;
  for (std::size_t i = 0; i + 1 < resp.times.size(); ++i) {
    const double e0 = resp.setpoint - resp.outputs[i];
    const double e1 = resp.setpoint - resp.outputs[i + 1];
    ise += 0.5 * (e0 * e0 + e1 * e1) * (resp.times[i + 1] - resp.times[i]);
  }
  return ise;
}

namespace {

// Linear interpolation of the crossing time between two samples, where
// excess changes sign from sample i to i+1.
double crossing_time(double t0, double t1, double e0, double e1) {
  if (e0 == e1) return t1;
  return t0 + (t1 - t0) * (e0 / (e0 - e1));
}

}  // namespace

ResponseMetrics compute_metrics(const StepResponse& resp, const SimConfig& config,
                                std::optional<double> dc_gain) {
  validate(config);
  if (resp.times.empty()) {
    throw std::invalid_argument("compute_metrics: empty response");
  }
  const std::size_t count = resp.times.size();

  ResponseMetrics metrics;
  metrics.ise = compute_ise(resp);

  if (dc_gain.has_value()) {
    metrics.final_value = resp.setpoint * (*dc_gain);
  } else {
    const std::size_t tail = std::max<std::size_t>(1, count / 20);
    double acc = 0.0;
    for (std::size_t i = count - tail; i < count; ++i) acc += resp.outputs[i];
    metrics.final_value = acc / static_cast<double>(tail);
  }
  const double final_value = metrics.final_value;
  if (std::abs(final_value) < 1e-12) {
    throw DomainError("final value is zero: overshoot undefined");
  }

  double peak = resp.outputs[0];
  for (double y : resp.outputs) peak = std::max(peak, y);
  metrics.overshoot_pct = 100.0 * std::max(0.0, peak - final_value) / std::abs(final_value);

  // Settling: last excursion outside the +-band envelope around the final
  // value; the reported instant is the interpolated re-entry time.
  const double band = config.settling_band * std::abs(final_value);
  auto excess = [&](std::size_t i) { return std::abs(resp.outputs[i] - final_value) - band; };
  std::size_t last_outside = count;  // sentinel: never outside
  for (std::size_t i = count; i-- > 0;) {
    if (excess(i) > 0.0) {
      last_outside = i;
      break;
    }
  }
  if (last_outside == count) {
    metrics.settling_time = resp.times.front();
  } else if (last_outside + 1 < count) {
    metrics.settling_time = crossing_time(resp.times[last_outside], resp.times[last_outside + 1],
                                          excess(last_outside), excess(last_outside + 1));
  }  // else: still outside at the horizon -> absent

  // Rise time between the first crossings of the two fractional levels.
  auto first_crossing = [&](double level) -> std::optional<double> {
    if (resp.outputs[0] >= level) return resp.times[0];
    for (std::size_t i = 0; i + 1 < count; ++i) {
      if (resp.outputs[i + 1] >= level) {
        return crossing_time(resp.times[i], resp.times[i + 1], resp.outputs[i] - level,
                             resp.outputs[i + 1] - level);
      }
    }
    return std::nullopt;
  };
  const auto t_lo = first_crossing(config.rise_lo * final_value);
  const auto t_hi = first_crossing(config.rise_hi * final_value);
  if (t_lo && t_hi) metrics.rise_time = *t_hi - *t_lo;

  return metrics;
}

}  // namespace pidtune
