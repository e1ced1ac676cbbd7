#pragma once

#include <stdexcept>
#include <string>

namespace pidtune {

/// A request that is well-formed but has no answer in the model domain:
/// ill-posed loops, unstable plants, missing ultimate gain, and the like.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by the simulator when the state stops being finite.
class SimulationDiverged : public DomainError {
 public:
  explicit SimulationDiverged(double time)
      : DomainError("simulation diverged at t = " + std::to_string(time) + " s"),
        time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

/// Bad user configuration (file or flags). Maps to exit status 1 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pidtune
