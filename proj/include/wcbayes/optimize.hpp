#ifndef WCBAYES_OPTIMIZE_HPP
#define WCBAYES_OPTIMIZE_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

namespace wcbayes {

struct ScalarOptimum {
  double argument = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of f on [lo, hi], stopping at bracket width `width`.
template <std::invocable<double> F>
ScalarOptimum golden_section_max(F&& f, double lo, double hi, double width = 1e-10) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

struct GridSearchOptions {
  std::size_t points = 10001;
  double width = 1e-10;
};

/// Maximize f over [lo, hi]: evaluate on a uniform grid, then refine around the best
/// grid point and around each extra seed with golden-section search. Seeds are also
/// evaluated exactly, so isolated spikes at known locations are not missed.
template <std::invocable<double> F>
ScalarOptimum grid_golden_max(F&& f, double lo, double hi, std::span<const double> seeds = {},
                              GridSearchOptions opts = {}) {
  if (!(hi > lo)) {
    const double x = 0.5 * (lo + hi);
    ScalarOptimum best{x, f(x)};
    for (double s : seeds) {
      const double v = f(s);
      if (v > best.value) best = {s, v};
    }
    return best;
  }
  const std::size_t n = opts.points < 3 ? 3 : opts.points;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  ScalarOptimum best{lo, f(lo)};
  for (std::size_t i = 1; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }

  std::vector<double> centers{best.argument};
  for (double s : seeds) {
    const double v = f(s);
    if (v > best.value) best = {s, v};
    centers.push_back(s);
  }
  for (double center : centers) {
    const ScalarOptimum refined = golden_section_max(f, center - step, center + step, opts.width);
    if (refined.value > best.value) best = refined;
  }
  return best;
}

/// Minimization counterpart of grid_golden_max.
template <std::invocable<double> F>
ScalarOptimum grid_golden_min(F&& f, double lo, double hi, std::span<const double> seeds = {},
                              GridSearchOptions opts = {}) {
  auto negated = [&](double x) { return -f(x); };
  ScalarOptimum r = grid_golden_max(negated, lo, hi, seeds, opts);
  r.value = -r.value;
  return r;
}

}  // namespace wcbayes

#endif
