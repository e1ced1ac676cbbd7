#include "pidtune/routh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pidtune {

namespace {

constexpr double kZeroTolerance = 1e-9;  // relative to the largest first-column entry

// Imaginary-axis frequencies of the auxiliary polynomial
// aux(s) = sum_j coeffs[j] * s^(top_degree - 2j).
std::vector<double> auxiliary_crossings(const std::vector<double>& coeffs, int top_degree) {
  std::vector<double> crossings;
  int degree = top_degree;
  if (degree % 2 == 1) {
    // Odd top degree means a factor of s: a root at the origin.
    crossings.push_back(0.0);
    degree -= 1;
  }
  if (degree <= 0) return crossings;

  // Substitute x = s^2 and solve the reduced polynomial.
  std::vector<double> reduced(static_cast<std::size_t>(degree / 2 + 1), 0.0);
  for (std::size_t j = 0; j < reduced.size() && j < coeffs.size(); ++j) reduced[j] = coeffs[j];
  Polynomial q(reduced);
  if (q.is_zero()) return crossings;
  if (q.degree() == 1) {
    const double x = -q.coeffs()[1] / q.coeffs()[0];
    if (x < 0.0) crossings.push_back(std::sqrt(-x));
    return crossings;
  }
  for (const auto& x : polynomial_roots(q)) {
    if (std::abs(x.imag()) <= 1e-7 * (1.0 + std::abs(x.real())) && x.real() < 0.0) {
      crossings.push_back(std::sqrt(-x.real()));
    }
  }
  std::sort(crossings.begin(), crossings.end());
  return crossings;
}

}  // namespace

RouthAnalysis routh_analyze(const Polynomial& den) {
  if (den.is_zero()) {
    throw std::invalid_argument("routh: zero polynomial");
  }
  if (den.degree() < 1) {
    throw std::invalid_argument("routh: polynomial degree must be at least 1");
  }

  std::vector<double> c = den.coeffs();
  if (c[0] < 0.0) {
    for (double& v : c) v = -v;
  }
  const int n = static_cast<int>(den.degree());
  const std::size_t width = static_cast<std::size_t>(n) / 2 + 1;

  std::vector<double> prev(width, 0.0);
  std::vector<double> cur(width, 0.0);
  for (std::size_t j = 0; 2 * j < c.size(); ++j) prev[j] = c[2 * j];
  for (std::size_t j = 0; 2 * j + 1 < c.size(); ++j) cur[j] = c[2 * j + 1];

  RouthAnalysis result;
  std::vector<double> first_column{prev[0]};
  std::vector<bool> substituted{false};
  double scale = std::abs(prev[0]);
  bool boundary_hit = false;

  for (int i = 1; i <= n; ++i) {
    const double tol = kZeroTolerance * scale;
    const bool row_zero =
        std::all_of(cur.begin(), cur.end(), [tol](double v) { return std::abs(v) <= tol; });
    bool eps_entry = false;

    if (row_zero) {
      // Auxiliary polynomial lives one row up, at degree n - i + 1.
      boundary_hit = true;
      const int aux_degree = n - i + 1;
      auto crossings = auxiliary_crossings(prev, aux_degree);
      result.imaginary_crossings.insert(result.imaginary_crossings.end(), crossings.begin(),
                                        crossings.end());
      // Continue the table with the derivative of the auxiliary polynomial.
      for (std::size_t j = 0; j < width; ++j) {
        const int exponent = aux_degree - 2 * static_cast<int>(j);
        cur[j] = exponent >= 1 ? prev[j] * exponent : 0.0;
      }
      if (std::abs(cur[0]) <= tol) {
        // Degenerate derivative row (constant auxiliary polynomial).
        cur[0] = tol > 0.0 ? tol : kZeroTolerance;
        eps_entry = true;
      }
    } else if (std::abs(cur[0]) <= tol) {
      // Isolated first-column zero: epsilon substitution.
      boundary_hit = true;
      cur[0] = tol > 0.0 ? tol : kZeroTolerance;
      eps_entry = true;
    }

    first_column.push_back(cur[0]);
    substituted.push_back(eps_entry);
    if (!eps_entry) scale = std::max(scale, std::abs(cur[0]));

    if (i < n) {
      std::vector<double> next(width, 0.0);
      for (std::size_t j = 0; j + 1 < width; ++j) {
        next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
      }
      prev = cur;
      cur = std::move(next);
    }
  }

  // Count sign changes across significant first-column entries.
  int changes = 0;
  double last_sign = 0.0;
  const double tol = kZeroTolerance * scale;
  for (std::size_t i = 0; i < first_column.size(); ++i) {
    if (substituted[i] || std::abs(first_column[i]) <= tol) continue;
    const double sign = first_column[i] > 0.0 ? 1.0 : -1.0;
    if (last_sign != 0.0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  result.sign_changes = changes;

  if (changes > 0) {
    result.verdict = Stability::Unstable;
  } else if (boundary_hit) {
    result.verdict = Stability::Marginal;
  } else {
    result.verdict = Stability::Stable;
  }
  std::sort(result.imaginary_crossings.begin(), result.imaginary_crossings.end());
  return result;
}

Stability routh_stable(const Polynomial& den) { return routh_analyze(den).verdict; }

double routh_boundary_margin(const Polynomial& den) {
  if (den.is_zero() || den.degree() < 1) {
    throw std::invalid_argument("routh: polynomial degree must be at least 1");
  }
  std::vector<double> c = den.coeffs();
  if (c[0] < 0.0) {
    for (double& v : c) v = -v;
  }
  const int n = static_cast<int>(den.degree());
  const std::size_t width = static_cast<std::size_t>(n) / 2 + 1;

  std::vector<double> prev(width, 0.0);
  std::vector<double> cur(width, 0.0);
  for (std::size_t j = 0; 2 * j < c.size(); ++j) prev[j] = c[2 * j];
  for (std::size_t j = 0; 2 * j + 1 < c.size(); ++j) cur[j] = c[2 * j + 1];

  double margin = prev[0];
  for (int i = 1; i <= n; ++i) {
    margin = std::min(margin, cur[0]);
    if (cur[0] == 0.0) return std::min(margin, 0.0);  // exactly on the boundary
    if (i < n) {
      std::vector<double> next(width, 0.0);
      for (std::size_t j = 0; j + 1 < width; ++j) {
        next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
      }
      prev = cur;
      cur = std::move(next);
    }
  }
  return margin;
}

const char* to_string(Stability verdict) {
  switch (verdict) {
    case Stability::Stable:
      return "stable";
    case Stability::Marginal:
      return "marginal";
    case Stability::Unstable:
      return "unstable";
  }
  return "unknown";
}

}  // namespace pidtune
