#include "pidtune/lti.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pidtune/errors.hpp"

namespace pidtune {

void validate(const PidGains& gains) {
  for (double g : {gains.kp, gains.ki, gains.kd}) {
    if (!std::isfinite(g) || g < 0.0) {
      throw std::invalid_argument("PID gains must be finite and non-negative");
    }
  }
}

TransferFunction::TransferFunction(Polynomial numerator, Polynomial denominator)
    : num(std::move(numerator)), den(std::move(denominator)) {
  if (den.is_zero()) {
    throw std::invalid_argument("transfer function denominator is the zero polynomial");
  }
}

bool is_proper(const TransferFunction& tf) {
  return tf.num.is_zero() || tf.num.degree() <= tf.den.degree();
}

bool is_strictly_proper(const TransferFunction& tf) {
  return tf.num.is_zero() || tf.num.degree() < tf.den.degree();
}

TransferFunction make_gain(double k) { return TransferFunction(Polynomial{k}, Polynomial{1.0}); }

TransferFunction pid_transfer_function(const PidGains& gains) {
  validate(gains);
  if (gains.kp == 0.0 && gains.ki == 0.0 && gains.kd == 0.0) {
    return TransferFunction(Polynomial{0.0}, Polynomial{1.0});
  }
  std::vector<double> num{gains.kd, gains.kp, gains.ki};
  std::vector<double> den{1.0, 0.0};
  while (num.size() > 1 && num.front() == 0.0) {
    num.erase(num.begin());
  }
  // Cancel the common factor of s when ki = 0 (both polynomials end in an
  // exact zero); keeps dc_gain well defined for P/PD controllers.
  while (num.size() > 1 && num.back() == 0.0 && den.size() > 1 && den.back() == 0.0) {
    num.pop_back();
    den.pop_back();
  }
  return TransferFunction(Polynomial(num), Polynomial(den));
}

TransferFunction closed_loop(const TransferFunction& plant, const TransferFunction& controller) {
  Polynomial open_num = controller.num * plant.num;
  Polynomial open_den = controller.den * plant.den;
  if (!open_num.is_zero() && open_num.degree() > open_den.degree()) {
    throw DomainError("open loop C*G is improper; closed loop is not realizable");
  }
  Polynomial t_den = open_den + open_num;
  if (t_den.is_zero()) {
    throw DomainError("ill-posed loop: 1 + C*G cancels to zero");
  }
  if (!open_num.is_zero() && open_num.degree() > t_den.degree()) {
    throw DomainError("ill-posed loop: closed-loop transfer function is improper");
  }
  return TransferFunction(std::move(open_num), std::move(t_den));
}

double dc_gain(const TransferFunction& tf) {
  const double den0 = tf.den.constant_term();
  const double num0 = tf.num.constant_term();
  if (den0 == 0.0) {
    if (num0 == 0.0) {
      throw DomainError("dc gain is indeterminate: num(0) = den(0) = 0");
    }
    throw DomainError("infinite dc gain: den(0) = 0 with num(0) != 0");
  }
  return num0 / den0;
}

std::complex<double> frequency_response(const TransferFunction& tf, double omega) {
  const std::complex<double> s(0.0, omega);
  return tf.num(s) / tf.den(s);
}

}  // namespace pidtune
