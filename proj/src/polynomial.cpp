#include "pidtune/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace pidtune {

namespace {

std::vector<double> trimmed(std::vector<double> c) {
  if (c.empty()) {
    throw std::invalid_argument("polynomial needs at least one coefficient");
  }
  for (double v : c) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("polynomial coefficients must be finite");
    }
  }
  std::size_t first = 0;
  while (first + 1 < c.size() && std::abs(c[first]) <= Polynomial::kTrimTolerance) {
    ++first;
  }
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(first));
  if (c.size() == 1 && std::abs(c[0]) <= Polynomial::kTrimTolerance) {
    c[0] = 0.0;
  }
  return c;
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(trimmed(std::vector<double>(coeffs))) {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(trimmed(std::move(coeffs))) {}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (double c : coeffs_) acc = acc * s + c;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  for (double c : coeffs_) acc = acc * s + c;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial{0.0};
  std::vector<double> d(coeffs_.size() - 1);
  const auto n = coeffs_.size() - 1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = coeffs_[i] * static_cast<double>(n - i);
  }
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const auto& pa = a.coeffs();
  const auto& pb = b.coeffs();
  std::vector<double> sum(std::max(pa.size(), pb.size()), 0.0);
  for (std::size_t i = 0; i < pa.size(); ++i) sum[sum.size() - pa.size() + i] += pa[i];
  for (std::size_t i = 0; i < pb.size(); ++i) sum[sum.size() - pb.size() + i] += pb[i];
  return Polynomial(std::move(sum));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{0.0};
  const auto& pa = a.coeffs();
  const auto& pb = b.coeffs();
  std::vector<double> prod(pa.size() + pb.size() - 1, 0.0);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      prod[i + j] += pa[i] * pb[j];
    }
  }
  return Polynomial(std::move(prod));
}

Polynomial operator*(double scale, const Polynomial& p) {
  std::vector<double> c = p.coeffs();
  for (double& v : c) v *= scale;
  return Polynomial(std::move(c));
}

std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
  if (p.is_zero()) {
    throw std::invalid_argument("zero polynomial has no root set");
  }
  const auto& c = p.coeffs();
  const auto n = c.size() - 1;
  if (n == 0) return {};

  // Companion matrix of the monic polynomial.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t i = 1; i < n; ++i) {
    companion(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    companion(static_cast<long>(i), static_cast<long>(n - 1)) = -c[n - i] / c[0];
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    roots[i] = solver.eigenvalues()(static_cast<long>(i));
  }
  return roots;
}

}  // namespace pidtune
