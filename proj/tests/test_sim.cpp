#include <doctest.h>

#include <cmath>

#include "pidtune/errors.hpp"
#include "pidtune/sim.hpp"

#include "oracles.hpp"

using namespace pidtune;

namespace {

const TransferFunction kPlant{Polynomial{1.0}, Polynomial{64.0, 9.6, 0.48, 0.008}};
// Both gain rows of the published comparison; used as fixed regression
// points throughout.
const PidGains kBaselineGains{0.038, 0.001, 0.170};
const PidGains kTunedGains{0.098, 0.006, 2.01};

StateSpaceModel loop_model(const PidGains& gains) {
  return to_state_space(closed_loop(kPlant, pid_transfer_function(gains)));
}

}  // namespace

TEST_CASE("sim config invariants") {
  SimConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.dt = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.horizon = 0.5;  // < 100*dt
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.settling_band = 0.7;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.rise_lo = 0.9;
  cfg.rise_hi = 0.1;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("first-order step response matches the closed form") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 10.0;
  const StateSpaceModel model = to_state_space({Polynomial{1.0}, Polynomial{1.0, 1.0}});
  const StepResponse resp = simulate_step(model, cfg);
  REQUIRE(resp.times.size() == 1001);
  double max_err = 0.0;
  for (std::size_t i = 0; i < resp.times.size(); ++i) {
    const double expected = 1.0 - std::exp(-resp.times[i]);
    max_err = std::max(max_err, std::abs(resp.outputs[i] - expected));
  }
  CHECK(max_err < 1e-8);
}

TEST_CASE("unstable model diverges with the failure time attached") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1000.0;
  const StateSpaceModel model = to_state_space({Polynomial{1.0}, Polynomial{1.0, -1.0}});
  CHECK_THROWS_AS(simulate_step(model, cfg), SimulationDiverged);
  try {
    simulate_step(model, cfg);
  } catch (const SimulationDiverged& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= cfg.horizon);
  }
}

TEST_CASE("simulator agrees with the exact discretization oracle") {
  SimConfig cfg;
  for (const auto& gains : {kBaselineGains, kTunedGains}) {
    const StateSpaceModel model = loop_model(gains);
    const StepResponse resp = simulate_step(model, cfg);
    const auto exact = oracles::exact_step_response(model, cfg.dt, resp.outputs.size());
    double max_err = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      max_err = std::max(max_err, std::abs(exact[i] - resp.outputs[i]));
    }
    CHECK(max_err < 1e-6);
  }
}

TEST_CASE("compute_ise basics") {
  StepResponse resp;
  resp.setpoint = 1.0;
  for (int i = 0; i <= 100; ++i) {
    resp.times.push_back(0.01 * i);
    resp.outputs.push_back(1.0);
  }
  CHECK(compute_ise(resp) == 0.0);

  resp.outputs.assign(resp.outputs.size(), 0.0);  // constant error of 1
  CHECK(compute_ise(resp) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(compute_ise(StepResponse{}), std::invalid_argument);
}

TEST_CASE("regression values for the published gain rows") {
  // Frozen from the oracle-validated simulator at dt = 0.01, horizon = 600,
  // band 2%.
  SimConfig cfg;
  SUBCASE("baseline row") {
    const TransferFunction loop = closed_loop(kPlant, pid_transfer_function(kBaselineGains));
    const StepResponse resp = simulate_step(to_state_space(loop), cfg);
    const ResponseMetrics m = compute_metrics(resp, cfg, dc_gain(loop));
    CHECK(m.ise == doctest::Approx(30.780965).epsilon(1e-5));
    REQUIRE(m.settling_time.has_value());
    CHECK(*m.settling_time == doctest::Approx(500.235).epsilon(1e-3));
    CHECK(m.overshoot_pct == doctest::Approx(60.629).epsilon(1e-3));
    CHECK(m.final_value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("tuned row") {
    const TransferFunction loop = closed_loop(kPlant, pid_transfer_function(kTunedGains));
    const StepResponse resp = simulate_step(to_state_space(loop), cfg);
    const ResponseMetrics m = compute_metrics(resp, cfg, dc_gain(loop));
    CHECK(m.ise == doctest::Approx(6.887987).epsilon(1e-5));
    REQUIRE(m.settling_time.has_value());
    CHECK(*m.settling_time == doctest::Approx(85.983).epsilon(1e-3));
    CHECK(m.overshoot_pct == doctest::Approx(43.428).epsilon(1e-3));
    REQUIRE(m.rise_time.has_value());
    CHECK(*m.rise_time == doctest::Approx(7.3054).epsilon(1e-3));
  }
}

TEST_CASE("quadrature is converged at the default step") {
  SimConfig coarse;
  SimConfig fine;
  fine.dt = 0.005;
  const StateSpaceModel model = loop_model(kBaselineGains);
  const double ise_coarse = compute_ise(simulate_step(model, coarse));
  const double ise_fine = compute_ise(simulate_step(model, fine));
  CHECK(std::abs(ise_coarse - ise_fine) / ise_fine < 1e-4);  // 0.01%
}

TEST_CASE("fast ISE path is bit-identical to the composed route") {
  SimConfig cfg;
  for (const auto& gains : {kBaselineGains, kTunedGains}) {
    const StateSpaceModel model = loop_model(gains);
    CHECK(simulate_step_ise(model, cfg) == compute_ise(simulate_step(model, cfg)));
  }
}

TEST_CASE("metrics on the monotone first-order response") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 20.0;
  const StateSpaceModel model = to_state_space({Polynomial{1.0}, Polynomial{1.0, 1.0}});
  const StepResponse resp = simulate_step(model, cfg);
  const ResponseMetrics m = compute_metrics(resp, cfg, 1.0);
  CHECK(m.overshoot_pct == 0.0);
  REQUIRE(m.settling_time.has_value());
  CHECK(*m.settling_time == doctest::Approx(std::log(50.0)).epsilon(1e-4));  // e^-t = 0.02
  REQUIRE(m.rise_time.has_value());
  CHECK(*m.rise_time == doctest::Approx(std::log(9.0)).epsilon(1e-4));  // ln(0.9/0.1)
}

TEST_CASE("settling time is absent when the response never holds the band") {
  // Truncate the slow loop well before it settles.
  SimConfig cfg;
  cfg.horizon = 100.0;
  const StateSpaceModel model = loop_model(kBaselineGains);
  const StepResponse resp = simulate_step(model, cfg);
  const ResponseMetrics m = compute_metrics(resp, cfg, 1.0);
  CHECK_FALSE(m.settling_time.has_value());
}

TEST_CASE("converged unit-gain responses settle") {
  SimConfig cfg;
  const StateSpaceModel model = loop_model(kTunedGains);
  const StepResponse resp = simulate_step(model, cfg);
  REQUIRE(std::abs(resp.outputs.back() - 1.0) < cfg.settling_band);
  const ResponseMetrics m = compute_metrics(resp, cfg, 1.0);
  CHECK(m.settling_time.has_value());
}

TEST_CASE("final value falls back to the tail mean without a dc gain") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 30.0;
  const StateSpaceModel model = to_state_space({Polynomial{2.0}, Polynomial{1.0, 1.0}});
  const StepResponse resp = simulate_step(model, cfg);
  const ResponseMetrics m = compute_metrics(resp, cfg);
  CHECK(m.final_value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("zero final value leaves overshoot undefined") {
  SimConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 10.0;
  StepResponse resp;
  resp.setpoint = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    resp.times.push_back(0.01 * i);
    resp.outputs.push_back(0.0);
  }
  CHECK_THROWS_AS(compute_metrics(resp, cfg, 0.0), DomainError);
}
