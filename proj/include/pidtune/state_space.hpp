#pragma once

#include <Eigen/Core>

#include "pidtune/lti.hpp"

namespace pidtune {

/// SISO state-space realization dx/dt = A x + B u, y = C x + D u.
struct StateSpaceModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::VectorXd C;
  double D = 0.0;

  Eigen::Index order() const { return A.rows(); }
};

/// Controllable canonical realization of a proper transfer function.
/// Throws DomainError for improper systems.
StateSpaceModel to_state_space(const TransferFunction& tf);

}  // namespace pidtune
