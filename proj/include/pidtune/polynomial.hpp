#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace pidtune {

/// Real polynomial in the Laplace variable s, coefficients stored highest
/// degree first. Construction trims leading coefficients smaller than
/// kTrimTolerance so that arithmetic cannot inflate the degree; the zero
/// polynomial is represented by the single coefficient [0].
class Polynomial {
 public:
  static constexpr double kTrimTolerance = 1e-12;

  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

  double leading() const { return coeffs_.front(); }
  double constant_term() const { return coeffs_.back(); }

  double operator()(double s) const;
  std::complex<double> operator()(std::complex<double> s) const;

  Polynomial derivative() const;

  bool operator==(const Polynomial& other) const = default;

 private:
  std::vector<double> coeffs_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double scale, const Polynomial& p);

/// Roots as eigenvalues of the companion matrix. Requires a nonzero
/// polynomial; the zero polynomial has no well-defined root set.
std::vector<std::complex<double>> polynomial_roots(const Polynomial& p);

}  // namespace pidtune
