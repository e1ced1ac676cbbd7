#include "pidtune/state_space.hpp"

#include "pidtune/errors.hpp"

namespace pidtune {

StateSpaceModel to_state_space(const TransferFunction& tf) {
  if (!is_proper(tf)) {
    throw DomainError("state-space realization requires a proper transfer function");
  }

  const auto n = static_cast<Eigen::Index>(tf.den.degree());
  const double lead = tf.den.leading();

  // Monic denominator and a numerator padded to the same length.
  std::vector<double> den = tf.den.coeffs();
  for (double& v : den) v /= lead;
  std::vector<double> num(den.size(), 0.0);
  {
    const auto& src = tf.num.coeffs();
    const std::size_t offset = den.size() - src.size();
    for (std::size_t i = 0; i < src.size(); ++i) num[offset + i] = src[i] / lead;
  }

  StateSpaceModel model;
  model.D = num[0];
  model.A = Eigen::MatrixXd::Zero(n, n);
  model.B = Eigen::VectorXd::Zero(n);
  model.C = Eigen::VectorXd::Zero(n);
  if (n == 0) return model;

  for (Eigen::Index i = 0; i + 1 < n; ++i) model.A(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    // Bottom row is the negated denominator, constant term first.
    model.A(n - 1, j) = -den[den.size() - 1 - static_cast<std::size_t>(j)];
  }
  model.B(n - 1) = 1.0;

  // Strictly-proper remainder num - D * den feeds the output map.
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t k = den.size() - 1 - static_cast<std::size_t>(j);
    model.C(j) = num[k] - model.D * den[k];
  }
  return model;
}

}  // namespace pidtune
