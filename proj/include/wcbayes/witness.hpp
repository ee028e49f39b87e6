#ifndef WCBAYES_WITNESS_HPP
#define WCBAYES_WITNESS_HPP

// Explicit discrete class-conditional measures that match the given moments and
// share a Dirac mass at the optimal shift; their exact Bayes error certifies the
// lower bound.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "wcbayes/error.hpp"
#include "wcbayes/lowerbound.hpp"
#include "wcbayes/moments.hpp"

namespace wcbayes {

struct WitnessOptions {
  double backoff = 1e-9;  // subtracted from shared masses whose supremum is not attained
  Tolerances tol{};
};

struct WitnessReport {
  LowerBoundResult lower;
  std::vector<double> epsilons;  // shared masses actually used
  std::vector<DiscreteMeasure> measures;
  std::vector<double> moment_mismatch;
  double bayes_error = 0.0;
  bool moments_ok = false;
  bool bound_ok = false;

  bool certified() const noexcept { return moments_ok && bound_ok; }
};

inline constexpr double kWitnessMomentTol = 1e-9;
inline constexpr double kWitnessBoundSlack = 1e-6;
inline constexpr double kAtomMergeTol = 1e-12;

/// Each class gets the atom (delta_star, eps_i) plus an atomic measure for the
/// residual moments [1 - eps_i, shifted gamma_1, ...], translated back by delta_star.
inline std::vector<DiscreteMeasure> build_witness(std::span<const ClassSpec> classes, double delta_star,
                                                  std::span<const double> epsilons, int n_moments,
                                                  const Tolerances& tol = {}) {
  if (epsilons.size() != classes.size()) throw Error(ErrorCode::InvalidInput, "one shared mass per class is required");
  // Backed-off residuals have zeroth moments near the back-off itself; judge rank below that scale.
  const Tolerances strict = tol.scaled(1e-3);
  std::vector<DiscreteMeasure> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const double eps = epsilons[i];
    if (!(eps >= 0.0 && eps <= 1.0))
      throw Error(ErrorCode::InfeasibleEpsilon, "shared mass must lie in [0, 1] for class " + std::to_string(i));
    const MomentSequence residual = shift_moments(classes[i].sequence(n_moments), delta_star).with_zeroth(1.0 - eps);
    const FeasibilityVerdict verdict = is_feasible(residual, strict);
    if (!verdict.feasible)
      throw Error(ErrorCode::InfeasibleEpsilon, "residual moments of class " + std::to_string(i) + " are infeasible (" +
                                                    std::string(to_string(verdict.reason)) + ")");
    DiscreteMeasure measure = recover_atoms(residual, strict).translated(delta_star);
    if (eps > 0.0) measure.atoms.push_back({delta_star, eps});
    out.push_back(measure.normalized());
  }
  return out;
}

/// 1 - sum over atom locations of max_i p(i) nu_i({x}); locations within 1e-12 are merged.
inline double discrete_bayes_error(std::span<const DiscreteMeasure> measures, std::span<const double> priors) {
  if (measures.size() != priors.size() || measures.empty())
    throw Error(ErrorCode::InvalidInput, "one prior per measure is required");
  struct Entry {
    double x;
    std::size_t cls;
    double mass;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (std::abs(measures[i].total_mass() - 1.0) > 1e-9)
      throw Error(ErrorCode::InvalidInput, "measure " + std::to_string(i) + " is not a probability measure");
    for (const auto& a : measures[i].atoms) entries.push_back({a.location, i, a.mass});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.x < b.x; });

  double covered = 0.0;
  std::vector<double> weighted(measures.size());
  for (std::size_t start = 0; start < entries.size();) {
    std::fill(weighted.begin(), weighted.end(), 0.0);
    std::size_t end = start;
    while (end < entries.size() && entries[end].x - entries[start].x <= kAtomMergeTol) {
      weighted[entries[end].cls] += priors[entries[end].cls] * entries[end].mass;
      ++end;
    }
    covered += *std::max_element(weighted.begin(), weighted.end());
    start = end;
  }
  return std::max(0.0, 1.0 - covered);
}

/// Builds the witness at the lower bound's optimal shift and checks moment fidelity
/// and the bound inequality. Throws UNSUPPORTED_RANK when a residual needs more than two atoms.
inline WitnessReport verify_witness(std::span<const ClassSpec> classes, int n_moments,
                                    const WitnessOptions& opts = {}) {
  WitnessReport report;
  report.lower = lower_bound(classes, n_moments, {opts.tol});
  const double delta = report.lower.delta_star;

  for (std::size_t i = 0; i < classes.size(); ++i) {
    double eps = report.lower.epsilons[i];
    bool attained = false;
    if (n_moments == 1) {
      attained = eps < 1.0;
    } else if (classes[i].variance() <= 0.0) {
      attained = true;
    } else {
      // eps = 1 would need the whole class at one point.
      attained = eps < 1.0 && (n_moments == 2 ? classes[i].gamma1() - delta != 0.0 || eps == 0.0 : eps == 0.0);
    }
    if (!attained) eps = std::max(0.0, eps - opts.backoff);
    report.epsilons.push_back(eps);
  }

  report.measures = build_witness(classes, delta, report.epsilons, n_moments, opts.tol);

  std::vector<double> priors;
  report.moments_ok = true;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    priors.push_back(classes[i].prior);
    const double mismatch = relative_mismatch(moments_of(report.measures[i], n_moments), classes[i].sequence(n_moments));
    report.moment_mismatch.push_back(mismatch);
    report.moments_ok = report.moments_ok && mismatch <= kWitnessMomentTol;
  }
  report.bayes_error = discrete_bayes_error(report.measures, priors);
  report.bound_ok = report.bayes_error >= report.lower.value - kWitnessBoundSlack;
  return report;
}

}  // namespace wcbayes

#endif
