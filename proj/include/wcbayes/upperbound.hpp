#ifndef WCBAYES_UPPERBOUND_HPP
#define WCBAYES_UPPERBOUND_HPP

// Upper bound on the worst-case Bayes error of two classes on the real line: the
// worst-case error of the best threshold classifier, where each class's error is
// bounded by the one-sided Chebyshev (Marshall-Olkin) probability of a half-line.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "wcbayes/error.hpp"
#include "wcbayes/lowerbound.hpp"
#include "wcbayes/optimize.hpp"

namespace wcbayes {

enum class HalfLine { LeftOfS, RightOfS };

struct UpperBoundResult {
  double value = 1.0;
  double s_star = 0.0;  // +-inf when the infimum is the limit of assigning everything to one class
  bool clipped = false;
};

/// sup over measures with mean mu and variance sigma2 of the probability of the half-line.
inline double worst_case_halfline_prob(double mu, double sigma2, double s, HalfLine side) {
  const bool inside = side == HalfLine::LeftOfS ? mu <= s : mu >= s;
  if (inside) return 1.0;
  if (sigma2 <= 0.0) return 0.0;
  const double d = s - mu;
  return 1.0 / (1.0 + d * d / sigma2);
}

namespace detail {

// Error when `left` is assigned (-inf, s] and `right` is assigned [s, inf).
inline double threshold_error(const ClassSpec& left, const ClassSpec& right, double s) {
  return left.prior * worst_case_halfline_prob(left.gamma1(), left.variance(), s, HalfLine::RightOfS) +
         right.prior * worst_case_halfline_prob(right.gamma1(), right.variance(), s, HalfLine::LeftOfS);
}

}  // namespace detail

/// Worst-case error of the threshold s; the class with the smaller mean takes the left half-line.
inline double linear_boundary_worst_error(const ClassSpec& c1, const ClassSpec& c2, double s) {
  if (c1.gamma1() < c2.gamma1()) return detail::threshold_error(c1, c2, s);
  if (c1.gamma1() > c2.gamma1()) return detail::threshold_error(c2, c1, s);
  return std::min(detail::threshold_error(c1, c2, s), detail::threshold_error(c2, c1, s));
}

/// min{ inf_s worst-case threshold error, 1 }. The infimum ranges over the extended line:
/// s -> +inf or -inf assigns everything to one class and costs the other class's prior.
inline UpperBoundResult upper_bound(std::span<const ClassSpec> classes) {
  if (classes.size() != 2) throw Error(ErrorCode::NotTwoClasses, "the threshold upper bound needs exactly two classes");
  const ClassSpec& c1 = classes[0];
  const ClassSpec& c2 = classes[1];
  const bool first_left = c1.gamma1() <= c2.gamma1();
  const ClassSpec& left = first_left ? c1 : c2;
  const ClassSpec& right = first_left ? c2 : c1;

  auto f = [&](double s) { return linear_boundary_worst_error(c1, c2, s); };
  const double lo = left.gamma1() - 10.0 * std::sqrt(left.variance());
  const double hi = right.gamma1() + 10.0 * std::sqrt(right.variance());
  const std::vector<double> seeds{c1.gamma1(), c2.gamma1()};
  const ScalarOptimum finite = grid_golden_min(f, lo, hi, seeds);

  UpperBoundResult result{finite.value, finite.argument, false};
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (right.prior < result.value) result = {right.prior, inf, false};
  if (left.prior < result.value) result = {left.prior, -inf, false};
  if (result.value > 1.0) {
    result.value = 1.0;
    result.clipped = true;
  }
  return result;
}

inline UpperBoundResult upper_bound(const ClassSpec& c1, const ClassSpec& c2) {
  const std::array<ClassSpec, 2> pair{c1, c2};
  return upper_bound(pair);
}

/// (G-1)/G, from max_i p(i|x) >= 1/G.
inline double trivial_upper_bound(int G) {
  if (G < 2) throw Error(ErrorCode::InvalidInput, "trivial bound needs at least two classes");
  return static_cast<double>(G - 1) / static_cast<double>(G);
}

}  // namespace wcbayes

#endif
