#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "wcbayes/gaussian.hpp"
#include "wcbayes/upperbound.hpp"

using namespace wcbayes;
using wcbayes::testing::gaussian_error_quadrature;
using wcbayes::testing::Rng;
using wcbayes::testing::uniform;

namespace {

// Maclaurin series of Phi, fine for |x| <= 4 in double.
double phi_series(double x) {
  double term = x, sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    sum += term / (2 * n + 1);
    term *= -x * x / (2.0 * (n + 1));
  }
  return 0.5 + sum / std::sqrt(2.0 * std::numbers::pi);
}

double quad(const GaussianPair& g) { return gaussian_error_quadrature(g.mu1, g.sigma1sq, g.mu2, g.sigma2sq, g.p1, g.p2); }

}  // namespace

TEST(NormalCdf, Examples) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(40.0), 1.0, 1e-12);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-15);
  for (double x = -4; x <= 4; x += 0.125) EXPECT_NEAR(normal_cdf(x), phi_series(x), 1e-12) << x;
}

TEST(NormalCdf, IntervalIsTailAccurate) {
  // Both ends deep in the upper tail: the direct difference of CDFs would round to zero.
  const double p = normal_interval(10.0, 11.0);
  EXPECT_GT(p, 0.0);
  EXPECT_NEAR(p, 0.5 * (std::erfc(10.0 / std::sqrt(2.0)) - std::erfc(11.0 / std::sqrt(2.0))), 1e-30);
  EXPECT_DOUBLE_EQ(normal_interval(-11.0, -10.0), p);
  EXPECT_DOUBLE_EQ(normal_interval(1.0, 1.0), 0.0);
}

TEST(GaussianError, IdenticalClasses) {
  EXPECT_DOUBLE_EQ(gaussian_pair_bayes_error({1, 1, 2, 2, 0.5, 0.5}), 0.5);
}

TEST(GaussianError, EqualVarianceMidpointBoundary) {
  const GaussianPair g{0, 2, 1, 1, 0.5, 0.5};
  const double e = gaussian_pair_bayes_error(g);
  EXPECT_NEAR(e, phi_series(-1.0), 1e-12);
  EXPECT_NEAR(e, 0.158655, 1e-6);
  EXPECT_NEAR(e, quad(g), 1e-8);
}

TEST(GaussianError, EqualMeansUnequalVariances) {
  const GaussianPair g{0, 0, 1, 5, 0.5, 0.5};
  // Crossing where x^2 (1/2 - 1/10) = log(sqrt(5)).
  const double x = std::sqrt(0.5 * std::log(5.0) / (0.5 - 0.1));
  const double oracle = 0.5 * 2.0 * (1.0 - phi_series(x)) + 0.5 * (2.0 * phi_series(x / std::sqrt(5.0)) - 1.0);
  const double e = gaussian_pair_bayes_error(g);
  EXPECT_NEAR(e, oracle, 1e-12);
  EXPECT_NEAR(e, quad(g), 1e-8);
  EXPECT_NEAR(e, 0.315, 1e-3);
}

TEST(GaussianError, InvalidInput) {
  EXPECT_THROW(gaussian_pair_bayes_error({0, 1, 0, 1, 0.5, 0.5}), Error);
  EXPECT_THROW(gaussian_pair_bayes_error({0, 1, 1, 1, 0.5, 0.6}), Error);
}

TEST(GaussianError, FarApartIsTiny) {
  const GaussianPair g{0, 40, 1, 1, 0.5, 0.5};
  const double e = gaussian_pair_bayes_error(g);
  EXPECT_GT(e, 0.0);
  EXPECT_NEAR(e, 0.5 * std::erfc(20.0 / std::sqrt(2.0)), 1e-100);
}

// Properties

TEST(GaussianErrorProperty, AgreesWithQuadrature) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = uniform(rng, 0.05, 0.95);
    const GaussianPair g{uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, 0.05, 6), uniform(rng, 0.05, 6), p, 1 - p};
    EXPECT_NEAR(gaussian_pair_bayes_error(g), quad(g), 1e-8) << trial;
  }
}

TEST(GaussianErrorProperty, RangeForEqualPriors) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianPair g{uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, 0.05, 6), uniform(rng, 0.05, 6), 0.5, 0.5};
    const double e = gaussian_pair_bayes_error(g);
    EXPECT_GT(e, 0.0);
    EXPECT_LT(e, 0.5);
  }
}

TEST(GaussianErrorProperty, TranslationAndScaleInvariance) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = uniform(rng, 0.1, 0.9);
    const GaussianPair g{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, 0.1, 4), uniform(rng, 0.1, 4), p, 1 - p};
    const double off = uniform(rng, -50, 50), t = uniform(rng, 0.05, 20);
    const double e = gaussian_pair_bayes_error(g);
    EXPECT_NEAR(gaussian_pair_bayes_error({g.mu1 + off, g.mu2 + off, g.sigma1sq, g.sigma2sq, p, 1 - p}), e, 1e-11);
    EXPECT_NEAR(gaussian_pair_bayes_error({t * g.mu1, t * g.mu2, t * t * g.sigma1sq, t * t * g.sigma2sq, p, 1 - p}), e, 1e-11);
    // Swapping labels.
    EXPECT_NEAR(gaussian_pair_bayes_error({g.mu2, g.mu1, g.sigma2sq, g.sigma1sq, 1 - p, p}), e, 1e-14);
  }
}

TEST(GaussianErrorProperty, NeverExceedsUpperBound) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = uniform(rng, 0.05, 0.95);
    const GaussianPair g{uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, 0.05, 6), uniform(rng, 0.05, 6), p, 1 - p};
    const double upper = upper_bound(ClassSpec::from_mean_variance(g.p1, g.mu1, g.sigma1sq),
                                     ClassSpec::from_mean_variance(g.p2, g.mu2, g.sigma2sq))
                             .value;
    EXPECT_LE(gaussian_pair_bayes_error(g), upper + 1e-12) << trial;
  }
}
