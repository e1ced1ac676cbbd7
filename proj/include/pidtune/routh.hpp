#pragma once

#include <optional>
#include <vector>

#include "pidtune/polynomial.hpp"

namespace pidtune {

enum class Stability { Stable, Marginal, Unstable };

/// Outcome of the Routh-Hurwitz table for a denominator polynomial.
///
/// sign_changes counts sign changes down the first column, i.e. the number
/// of right-half-plane roots. imaginary_crossings holds the frequencies
/// (rad/s) recovered from the auxiliary polynomial when an all-zero row was
/// met; it is empty unless the polynomial sits on the stability boundary.
struct RouthAnalysis {
  Stability verdict = Stability::Stable;
  int sign_changes = 0;
  std::vector<double> imaginary_crossings;

  std::optional<double> crossing_frequency() const {
    if (imaginary_crossings.empty()) return std::nullopt;
    return imaginary_crossings.front();
  }
};

/// Full Routh table analysis. Requires degree >= 1; the sign of the leading
/// coefficient is normalized first. A first-column entry whose magnitude is
/// below 1e-9 times the largest first-column magnitude counts as zero.
RouthAnalysis routh_analyze(const Polynomial& den);

/// Verdict-only convenience wrapper.
Stability routh_stable(const Polynomial& den);

/// Smallest first-column entry of the Routh table, computed without the
/// zero tolerance. Positive strictly inside the stable region and negative
/// past the boundary, so its sign change locates the stability boundary far
/// more sharply than the tolerance-snapped verdict.
double routh_boundary_margin(const Polynomial& den);

const char* to_string(Stability verdict);

}  // namespace pidtune
