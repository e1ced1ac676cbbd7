#pragma once

#include "pidtune/polynomial.hpp"

namespace pidtune {

/// Controller coefficients of the proportional, integral and derivative
/// terms. All three are finite and non-negative.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;  // 1/seconds
  double kd = 0.0;  // seconds

  bool operator==(const PidGains&) const = default;
};

void validate(const PidGains& gains);

/// Rational LTI model num(s)/den(s). The denominator is never the zero
/// polynomial.
struct TransferFunction {
  TransferFunction(Polynomial numerator, Polynomial denominator);

  Polynomial num;
  Polynomial den;
};

bool is_proper(const TransferFunction& tf);
bool is_strictly_proper(const TransferFunction& tf);

TransferFunction make_gain(double k);

/// Ideal-derivative PID controller C(s) = (kd s^2 + kp s + ki) / s.
/// Degenerate gain patterns are reduced: leading zero coefficients are
/// trimmed and a common factor of s is cancelled, so a P-only controller
/// comes back as the pure gain kp/1.
TransferFunction pid_transfer_function(const PidGains& gains);

/// Unity negative feedback around the series connection controller*plant:
/// T = C G / (1 + C G). Throws DomainError if the open loop C*G is improper
/// or the resulting denominator degenerates to the zero polynomial.
TransferFunction closed_loop(const TransferFunction& plant, const TransferFunction& controller);

/// num(0)/den(0). Throws DomainError when den(0) = 0 (infinite gain if
/// num(0) != 0, indeterminate 0/0 otherwise).
double dc_gain(const TransferFunction& tf);

/// Evaluate the frequency response at s = j*omega.
std::complex<double> frequency_response(const TransferFunction& tf, double omega);

}  // namespace pidtune
