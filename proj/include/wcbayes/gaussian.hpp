#ifndef WCBAYES_GAUSSIAN_HPP
#define WCBAYES_GAUSSIAN_HPP

// Bayes error of two Gaussian class-conditionals (the QDA assumption) on the real line.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wcbayes/error.hpp"

namespace wcbayes {

struct GaussianPair {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1sq = 1.0;
  double sigma2sq = 1.0;
  double p1 = 0.5;
  double p2 = 0.5;
};

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// P(a < Z < b) for a standard normal Z, evaluated on the tail that avoids cancellation.
inline double normal_interval(double a, double b) {
  if (!(b > a)) return 0.0;
  if (a >= 0.0) return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
  return normal_cdf(b) - normal_cdf(a);
}

namespace detail {

inline void validate(const GaussianPair& g) {
  if (!(g.sigma1sq > 0.0 && g.sigma2sq > 0.0)) throw Error(ErrorCode::InvalidInput, "Gaussian variances must be positive");
  if (!(g.p1 > 0.0 && g.p2 > 0.0) || std::abs(g.p1 + g.p2 - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidInput, "Gaussian priors must be positive and sum to 1");
}

// log(p1 N(x; mu1, sigma1sq)) - log(p2 N(x; mu2, sigma2sq)).
inline double log_density_ratio(const GaussianPair& g, double x) {
  const double a = (x - g.mu1) * (x - g.mu1) / (2.0 * g.sigma1sq);
  const double b = (x - g.mu2) * (x - g.mu2) / (2.0 * g.sigma2sq);
  return std::log(g.p1 / g.p2) + 0.5 * std::log(g.sigma2sq / g.sigma1sq) - a + b;
}

// Real roots of a x^2 + b x + c = 0 in increasing order; a tangent double root counts as none.
inline std::vector<double> crossings(double a, double b, double c, double scale) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 1e-12 * scale) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a;
  double r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace detail

/// Integral of min(p1 f1, p2 f2): the weighted densities cross where a quadratic in x
/// vanishes, and on each resulting interval the class with the smaller weighted density
/// contributes its probability mass to the error.
inline double gaussian_pair_bayes_error(const GaussianPair& g) {
  detail::validate(g);
  const double a = 1.0 / (2.0 * g.sigma2sq) - 1.0 / (2.0 * g.sigma1sq);
  const double b = g.mu1 / g.sigma1sq - g.mu2 / g.sigma2sq;
  const double c = g.mu2 * g.mu2 / (2.0 * g.sigma2sq) - g.mu1 * g.mu1 / (2.0 * g.sigma1sq) +
                   std::log(g.p1 / g.p2) + 0.5 * std::log(g.sigma2sq / g.sigma1sq);
  const double scale = std::max({b * b, std::abs(4.0 * a * c), std::numeric_limits<double>::min()});
  const auto roots = detail::crossings(a, b, c, scale);

  const double s1 = std::sqrt(g.sigma1sq), s2 = std::sqrt(g.sigma2sq);
  const double far = 50.0 * std::max(s1, s2);
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> edges{-inf};
  edges.insert(edges.end(), roots.begin(), roots.end());
  edges.push_back(inf);

  double error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    double probe;
    if (std::isfinite(lo) && std::isfinite(hi)) probe = 0.5 * (lo + hi);
    else if (std::isfinite(hi)) probe = std::min(hi, std::min(g.mu1, g.mu2)) - far;
    else if (std::isfinite(lo)) probe = std::max(lo, std::max(g.mu1, g.mu2)) + far;
    else probe = 0.5 * (g.mu1 + g.mu2);
    const bool first_wins = detail::log_density_ratio(g, probe) >= 0.0;
    if (first_wins)
      error += g.p2 * normal_interval((lo - g.mu2) / s2, (hi - g.mu2) / s2);
    else
      error += g.p1 * normal_interval((lo - g.mu1) / s1, (hi - g.mu1) / s1);
  }
  return error;
}

}  // namespace wcbayes

#endif
