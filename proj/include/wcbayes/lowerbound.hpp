#ifndef WCBAYES_LOWERBOUND_HPP
#define WCBAYES_LOWERBOUND_HPP

// Lower bounds on the worst-case Bayes error. Every class-conditional measure is
// forced to carry a Dirac mass eps_i at a common location Delta; the Bayes error of
// such a family is at least sum_i p(i) eps_i - max_i p(i) eps_i, and Delta is chosen
// to make that as large as possible.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wcbayes/error.hpp"
#include "wcbayes/moments.hpp"
#include "wcbayes/optimize.hpp"

namespace wcbayes {

/// One class: prior and raw moments gamma_1 .. gamma_n (gamma_0 = 1 implied).
struct ClassSpec {
  double prior = 0.0;
  std::vector<double> moments;

  static ClassSpec from_mean_variance(double prior, double mean, double variance) {
    return {prior, {mean, variance + mean * mean}};
  }

  int n_moments() const noexcept { return static_cast<int>(moments.size()); }

  double gamma(int j) const {
    if (j == 0) return 1.0;
    if (j < 0 || j > n_moments()) throw Error(ErrorCode::InvalidInput, "moment order not available for class");
    return moments[static_cast<std::size_t>(j - 1)];
  }
  double gamma1() const { return gamma(1); }
  double gamma2() const { return gamma(2); }

  /// sigma^2 = gamma_2 - gamma_1^2, clamped at zero against rounding.
  double variance() const { return std::max(0.0, gamma2() - gamma1() * gamma1()); }

  /// [1, gamma_1, ..., gamma_n].
  MomentSequence sequence(int n) const {
    if (n > n_moments()) throw Error(ErrorCode::InvalidInput, "class provides fewer moments than requested");
    std::vector<double> g{1.0};
    g.insert(g.end(), moments.begin(), moments.begin() + n);
    return MomentSequence(std::move(g));
  }
};

enum class LowerBoundMethod { FirstMoment, ClosedFormG2, Numeric, Midpoint };

constexpr std::string_view to_string(LowerBoundMethod m) noexcept {
  switch (m) {
    case LowerBoundMethod::FirstMoment: return "FIRST_MOMENT";
    case LowerBoundMethod::ClosedFormG2: return "CLOSED_FORM_G2";
    case LowerBoundMethod::Numeric: return "NUMERIC";
    case LowerBoundMethod::Midpoint: return "MIDPOINT";
  }
  return "UNKNOWN";
}

struct LowerBoundResult {
  double value = 0.0;
  double delta_star = 0.0;
  std::vector<double> epsilons;
  bool attained = false;
  LowerBoundMethod method = LowerBoundMethod::Numeric;
  std::string diagnostic;
};

struct FirstMomentBound {
  double value = 0.0;
  bool attained = false;
};

/// Which shift-dependent bound the numeric search maximizes:
/// SumMinusMax is sum p f - max p f, MinTerm is the weaker (G-1) min p f.
enum class ShiftCriterion { SumMinusMax, MinTerm };

namespace detail {

inline constexpr double kPriorSumTol = 1e-12;

inline bool priors_equal(std::span<const ClassSpec> classes) {
  return std::all_of(classes.begin(), classes.end(),
                     [&](const ClassSpec& c) { return std::abs(c.prior - classes.front().prior) <= kPriorSumTol; });
}

inline bool variances_equal(std::span<const ClassSpec> classes) {
  const double v0 = classes.front().variance();
  return std::all_of(classes.begin(), classes.end(), [&](const ClassSpec& c) {
    const double v = c.variance();
    return std::abs(v - v0) <= 1e-12 * std::max(v, v0);
  });
}

inline double combine(std::span<const double> weighted, ShiftCriterion criterion) {
  const double mx = *std::max_element(weighted.begin(), weighted.end());
  if (criterion == ShiftCriterion::MinTerm) {
    const double mn = *std::min_element(weighted.begin(), weighted.end());
    return static_cast<double>(weighted.size() - 1) * mn;
  }
  return std::accumulate(weighted.begin(), weighted.end(), 0.0) - mx;
}

struct ShiftBracket {
  double lo, hi;
  double max_sigma;
  std::vector<double> means;
};

inline ShiftBracket shift_bracket(std::span<const ClassSpec> classes) {
  ShiftBracket b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0, {}};
  for (const auto& c : classes) {
    b.lo = std::min(b.lo, c.gamma1());
    b.hi = std::max(b.hi, c.gamma1());
    b.max_sigma = std::max(b.max_sigma, std::sqrt(c.variance()));
    b.means.push_back(c.gamma1());
  }
  b.lo -= 10.0 * b.max_sigma;
  b.hi += 10.0 * b.max_sigma;
  return b;
}

inline void validate_priors(std::span<const ClassSpec> classes) {
  if (classes.size() < 2) throw Error(ErrorCode::InvalidInput, "at least two classes are required");
  double total = 0.0;
  for (const auto& c : classes) {
    if (!(c.prior > 0.0 && c.prior < 1.0)) throw Error(ErrorCode::InvalidInput, "priors must lie in (0, 1)");
    total += c.prior;
  }
  if (std::abs(total - 1.0) > kPriorSumTol) throw Error(ErrorCode::InvalidInput, "priors must sum to 1");
}

}  // namespace detail

/// Largest shareable mass at shift delta using the first two moments:
/// sigma^2 / (sigma^2 + (delta - gamma_1)^2); a point mass shares everything only at its location.
inline double overlap_fraction(const ClassSpec& c, double delta) {
  const double var = c.variance();
  const double dev = delta - c.gamma1();
  if (var <= 0.0) return dev == 0.0 ? 1.0 : 0.0;
  return var / (var + dev * dev);
}

inline double objective(std::span<const ClassSpec> classes, double delta,
                        ShiftCriterion criterion = ShiftCriterion::SumMinusMax) {
  std::vector<double> weighted;
  weighted.reserve(classes.size());
  for (const auto& c : classes) weighted.push_back(c.prior * overlap_fraction(c, delta));
  return detail::combine(weighted, criterion);
}

/// Closed-form optimal shift for two equally likely classes: the crossing point of
/// the two overlap fractions that lies between the means.
inline double optimal_shift_two_class(const ClassSpec& c1, const ClassSpec& c2) {
  if (std::abs(c1.prior - c2.prior) > detail::kPriorSumTol)
    throw Error(ErrorCode::PriorsUnequal, "closed-form shift requires equal priors");
  const double m1 = c1.gamma1(), m2 = c2.gamma1();
  if (m1 == m2) return m1;
  const double v1 = c1.variance(), v2 = c2.variance();
  const std::array<ClassSpec, 2> pair{c1, c2};
  if (std::abs(v1 - v2) <= 1e-12 * std::max(v1, v2)) return 0.5 * (m1 + m2);

  const double center = -(m2 * v1 - m1 * v2);
  const double spread = std::sqrt(v1) * std::sqrt(v2) * std::abs(m1 - m2);
  const double denom = v2 - v1;
  const double roots[2] = {(center + spread) / denom, (center - spread) / denom};
  const double lo = std::min(m1, m2), hi = std::max(m1, m2);

  // The optimum lies between the means; clamp only if rounding pushed both roots out.
  double best = 0.5 * (lo + hi);
  double best_value = -1.0;
  bool any_inside = false;
  for (double r : roots) {
    if (r < lo || r > hi) continue;
    any_inside = true;
    if (const double v = objective(pair, r); v > best_value) {
      best = r;
      best_value = v;
    }
  }
  if (!any_inside) {
    for (double r : roots) {
      const double candidate = std::clamp(r, lo, hi);
      if (const double v = objective(pair, candidate); v > best_value) {
        best = candidate;
        best_value = v;
      }
    }
  }
  return best;
}

/// Numeric maximization of the shift-dependent bound over Delta.
inline double optimal_shift_numeric(std::span<const ClassSpec> classes,
                                    ShiftCriterion criterion = ShiftCriterion::SumMinusMax) {
  if (classes.size() < 2) throw Error(ErrorCode::InvalidInput, "at least two classes are required");
  const auto bracket = detail::shift_bracket(classes);
  auto f = [&](double delta) { return objective(classes, delta, criterion); };

  if (bracket.max_sigma == 0.0) {
    auto sorted = bracket.means;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end())
      throw Error(ErrorCode::AllDegenerate, "all classes are point masses at distinct locations");
    double best = sorted.front();
    for (double m : sorted)
      if (f(m) > f(best)) best = m;
    return best;
  }
  return grid_golden_max(f, bracket.lo, bracket.hi, bracket.means).argument;
}

/// Midpoint of the extreme means; optimal for the min-form bound when all
/// variances and priors are equal.
inline double equal_variance_midpoint(std::span<const ClassSpec> classes) {
  if (classes.empty()) throw Error(ErrorCode::InvalidInput, "no classes");
  if (!detail::priors_equal(classes) || !detail::variances_equal(classes))
    throw Error(ErrorCode::PreconditionViolated, "midpoint shift needs equal priors and equal variances");
  auto [lo, hi] = std::minmax_element(classes.begin(), classes.end(),
                                      [](const ClassSpec& a, const ClassSpec& b) { return a.gamma1() < b.gamma1(); });
  return 0.5 * (lo->gamma1() + hi->gamma1());
}

/// Only the means are known: the bound 1 - max p(i) is a supremum, approached as eps -> 1.
inline FirstMomentBound first_moment_bound(std::span<const double> priors) {
  if (priors.empty()) throw Error(ErrorCode::InvalidInput, "no priors");
  return {1.0 - *std::max_element(priors.begin(), priors.end()), false};
}

struct LowerBoundOptions {
  Tolerances tol{};
};

/// Lower bound on the supremum Bayes error given n_moments raw moments per class.
inline LowerBoundResult lower_bound(std::span<const ClassSpec> classes, int n_moments,
                                    const LowerBoundOptions& opts = {}) {
  detail::validate_priors(classes);
  if (n_moments < 1) throw Error(ErrorCode::InvalidInput, "at least one moment per class is required");
  for (const auto& c : classes) {
    if (c.n_moments() < n_moments) throw Error(ErrorCode::InvalidInput, "class provides fewer moments than requested");
  }

  LowerBoundResult result;
  const std::size_t G = classes.size();

  if (n_moments == 1) {
    std::vector<double> priors;
    for (const auto& c : classes) priors.push_back(c.prior);
    const auto fm = first_moment_bound(priors);
    result.value = fm.value;
    result.attained = fm.attained;
    result.delta_star = 0.0;
    result.epsilons.assign(G, 1.0);
    result.method = LowerBoundMethod::FirstMoment;
    return result;
  }

  for (std::size_t i = 0; i < G; ++i) {
    const auto verdict = is_feasible(classes[i].sequence(n_moments), opts.tol);
    if (!verdict.feasible)
      throw Error(ErrorCode::InfeasibleClass, "class " + std::to_string(i) + " moments are infeasible (" +
                                                  std::string(to_string(verdict.reason)) + ")");
  }

  if (n_moments <= 3) {
    double delta = 0.0;
    if (G == 2 && detail::priors_equal(classes)) {
      delta = optimal_shift_two_class(classes[0], classes[1]);
      result.method = LowerBoundMethod::ClosedFormG2;
    } else {
      try {
        delta = optimal_shift_numeric(classes);
        result.method = LowerBoundMethod::Numeric;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AllDegenerate) throw;
        delta = classes.front().gamma1();
        result.method = LowerBoundMethod::Numeric;
        result.diagnostic = "all classes are point masses at distinct locations; bound is 0";
      }
      if (detail::priors_equal(classes) && detail::variances_equal(classes)) {
        const double mid = equal_variance_midpoint(classes);
        if (objective(classes, mid) >= objective(classes, delta)) {
          delta = mid;
          result.method = LowerBoundMethod::Midpoint;
        }
      }
    }
    result.delta_star = delta;
    result.value = objective(classes, delta);
    result.attained = n_moments == 2;
    for (const auto& c : classes) {
      const double eps = overlap_fraction(c, delta);
      result.epsilons.push_back(eps);
      // At eps = 1 with positive variance the residual [0, 0, sigma^2] is infeasible.
      if (c.variance() > 0.0 && c.gamma1() - delta == 0.0) result.attained = false;
    }
    if (n_moments == 3 && std::all_of(result.epsilons.begin(), result.epsilons.end(),
                                      [](double e) { return e == 0.0; }))
      result.attained = true;
    return result;
  }

  // n >= 4: the shareable mass at each shift comes from the full truncated moment problem.
  std::vector<MomentSequence> sequences;
  for (const auto& c : classes) sequences.push_back(c.sequence(n_moments));
  auto epsilons_at = [&](double delta) {
    std::vector<double> eps(G);
    for (std::size_t i = 0; i < G; ++i) {
      if (classes[i].variance() <= 0.0)
        eps[i] = overlap_fraction(classes[i], delta);
      else
        eps[i] = max_shared_mass(shift_moments(sequences[i], delta), opts.tol).epsilon;
    }
    return eps;
  };
  auto value_at = [&](double delta) {
    const auto eps = epsilons_at(delta);
    std::vector<double> weighted(G);
    for (std::size_t i = 0; i < G; ++i) weighted[i] = classes[i].prior * eps[i];
    return detail::combine(weighted, ShiftCriterion::SumMinusMax);
  };
  const auto bracket = detail::shift_bracket(classes);
  // Each evaluation is a bisection; a coarser scan is enough before golden refinement.
  const ScalarOptimum best =
      grid_golden_max(value_at, bracket.lo, bracket.hi, bracket.means, GridSearchOptions{.points = 1001});
  result.delta_star = best.argument;
  result.value = best.value;
  result.epsilons = epsilons_at(best.argument);
  result.attained = false;
  result.method = LowerBoundMethod::Numeric;
  return result;
}

}  // namespace wcbayes

#endif
