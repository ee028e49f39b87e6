#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "test_support.hpp"
#include "wcbayes/lowerbound.hpp"

using namespace wcbayes;
using wcbayes::testing::refined_grid_sup;
using wcbayes::testing::Rng;
using wcbayes::testing::uniform;

namespace {

ClassSpec mv(double prior, double mean, double var) { return ClassSpec::from_mean_variance(prior, mean, var); }

double equal_variance_formula(double var, double d) { return 2.0 * var / (4.0 * var + d * d); }

}  // namespace

TEST(OverlapFraction, Examples) {
  const ClassSpec c = mv(0.5, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(overlap_fraction(c, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(overlap_fraction(c, 1.0), 0.5);
  // Raw-moment form 1 - (g1 - D)^2 / (g2 + D^2 - 2 D g1).
  const double g1 = c.gamma1(), g2 = c.gamma2(), D = 1.0;
  EXPECT_DOUBLE_EQ(1.0 - (g1 - D) * (g1 - D) / (g2 + D * D - 2 * D * g1), 0.5);

  const ClassSpec point = mv(0.5, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(overlap_fraction(point, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(overlap_fraction(point, 2.5), 0.0);
}

TEST(Objective, Examples) {
  const std::vector<ClassSpec> twins{mv(0.5, 1.0, 2.0), mv(0.5, 1.0, 2.0)};
  for (double d : {-3.0, 0.0, 1.0, 4.5}) EXPECT_DOUBLE_EQ(objective(twins, d), 0.5 * overlap_fraction(twins[1], d));

  const std::vector<ClassSpec> pair{mv(0.5, 0.0, 1.0), mv(0.5, 2.0, 1.0)};
  EXPECT_DOUBLE_EQ(objective(pair, 1.0), 0.25);
  for (double d = -5; d <= 7; d += 0.37)
    EXPECT_DOUBLE_EQ(objective(pair, d), 0.5 * std::min(overlap_fraction(pair[0], d), overlap_fraction(pair[1], d)));
}

TEST(OptimalShiftTwoClass, EqualVariancesGiveMidpoint) {
  EXPECT_DOUBLE_EQ(optimal_shift_two_class(mv(0.5, 0, 1), mv(0.5, 2, 1)), 1.0);
}

TEST(OptimalShiftTwoClass, UnequalVariancesQuadraticRoot) {
  const ClassSpec a = mv(0.5, 0, 1), b = mv(0.5, 4, 5);
  const double delta = optimal_shift_two_class(a, b);
  EXPECT_NEAR(delta, std::sqrt(5.0) - 1.0, 1e-12);
  EXPECT_NEAR(overlap_fraction(a, delta), overlap_fraction(b, delta), 1e-12);
  EXPECT_NEAR(overlap_fraction(a, delta), 0.395591, 1e-6);

  const std::vector<ClassSpec> pair{a, b};
  const auto [x, v] = refined_grid_sup([&](double d) { return objective(pair, d); }, -10, 14);
  EXPECT_NEAR(delta, x, 1e-4);
  EXPECT_NEAR(objective(pair, delta), v, 1e-6);
}

TEST(OptimalShiftTwoClass, EqualMeansReturnCommonMean) {
  const ClassSpec a = mv(0.5, 1.5, 1), b = mv(0.5, 1.5, 7);
  EXPECT_DOUBLE_EQ(optimal_shift_two_class(a, b), 1.5);
  const std::vector<ClassSpec> pair{a, b};
  EXPECT_DOUBLE_EQ(objective(pair, 1.5), 0.5);
}

TEST(OptimalShiftTwoClass, UnequalPriorsRejected) {
  try {
    optimal_shift_two_class(mv(0.4, 0, 1), mv(0.6, 2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PriorsUnequal);
  }
}

TEST(OptimalShiftTwoClass, PointMassClass) {
  // f of the point mass is 1 only at its location; the other class contributes 1/2 there.
  EXPECT_DOUBLE_EQ(optimal_shift_two_class(mv(0.5, 1, 0), mv(0.5, 0, 1)), 1.0);
}

TEST(OptimalShiftNumeric, AgreesWithClosedFormForEqualPriors) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto classes = wcbayes::testing::random_two_class(rng);
    const double closed = optimal_shift_two_class(classes[0], classes[1]);
    const double numeric = optimal_shift_numeric(classes);
    EXPECT_NEAR(objective(classes, numeric), objective(classes, closed), 1e-6) << "trial " << trial;
  }
}

TEST(OptimalShiftNumeric, MinFormOptimumIsMidpointForEqualVariances) {
  const std::vector<ClassSpec> three{mv(1.0 / 3, 0, 1), mv(1.0 / 3, 1, 1), mv(1.0 / 3, 5, 1)};
  EXPECT_NEAR(optimal_shift_numeric(three, ShiftCriterion::MinTerm), 2.5, 1e-8);
  EXPECT_DOUBLE_EQ(equal_variance_midpoint(three), 2.5);
}

TEST(OptimalShiftNumeric, SumMinusMaxMatchesDenseGrid) {
  const std::vector<ClassSpec> three{mv(1.0 / 3, 0, 1), mv(1.0 / 3, 1, 1), mv(1.0 / 3, 5, 1)};
  const auto [x, v] = refined_grid_sup([&](double d) { return objective(three, d); }, -10, 15);
  const double delta = optimal_shift_numeric(three);
  EXPECT_NEAR(delta, x, 1e-4);
  EXPECT_NEAR(objective(three, delta), v, 1e-9);
  // The sum-minus-max optimum beats the midpoint here.
  EXPECT_GT(objective(three, delta), objective(three, 2.5));
}

TEST(OptimalShiftNumeric, OptimumBetweenExtremeMeans) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ClassSpec> classes;
    const int G = 2 + trial % 3;
    for (int i = 0; i < G; ++i) classes.push_back(mv(1.0 / G, uniform(rng, -4, 4), uniform(rng, 0.2, 3)));
    if (G == 3) classes[2].prior = 1.0 - 2.0 / 3;
    double lo = 1e9, hi = -1e9;
    for (const auto& c : classes) {
      lo = std::min(lo, c.gamma1());
      hi = std::max(hi, c.gamma1());
    }
    const double delta = optimal_shift_numeric(classes);
    EXPECT_GE(delta, lo - 1e-9);
    EXPECT_LE(delta, hi + 1e-9);
  }
}

TEST(OptimalShiftNumeric, AllDegenerate) {
  const std::vector<ClassSpec> points{mv(0.5, 0, 0), mv(0.5, 1, 0)};
  try {
    optimal_shift_numeric(points);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllDegenerate);
  }
}

TEST(LowerBound, EqualVarianceClosedForm) {
  const std::vector<ClassSpec> pair{mv(0.5, 0, 1), mv(0.5, 2, 1)};
  const auto r = lower_bound(pair, 2);
  EXPECT_DOUBLE_EQ(r.value, 0.25);
  EXPECT_DOUBLE_EQ(r.value, equal_variance_formula(1, 2));
  EXPECT_DOUBLE_EQ(r.delta_star, 1.0);
  EXPECT_EQ(r.method, LowerBoundMethod::ClosedFormG2);
  EXPECT_TRUE(r.attained);
  ASSERT_EQ(r.epsilons.size(), 2u);
  EXPECT_DOUBLE_EQ(r.epsilons[0], 0.5);

  const auto numeric = optimal_shift_numeric(pair);
  EXPECT_NEAR(objective(pair, numeric), 0.25, 1e-9);
}

TEST(LowerBound, UnequalVarianceSpotValue) {
  const std::vector<ClassSpec> pair{mv(0.5, 0, 1), mv(0.5, 4, 5)};
  const auto r = lower_bound(pair, 2);
  const auto [x, v] = refined_grid_sup([&](double d) { return objective(pair, d); }, -10, 14);
  EXPECT_NEAR(r.value, v, 1e-6);
  EXPECT_NEAR(r.value, 0.197796, 1e-6);
  EXPECT_NEAR(r.delta_star, x, 1e-4);
}

TEST(LowerBound, EqualMeansGiveOneHalfNotAttained) {
  for (double v2 : {1.0, 3.0, 9.0}) {
    const std::vector<ClassSpec> pair{mv(0.5, 2, 1), mv(0.5, 2, v2)};
    const auto r = lower_bound(pair, 2);
    EXPECT_DOUBLE_EQ(r.value, 0.5);
    EXPECT_FALSE(r.attained);
  }
}

TEST(LowerBound, FirstMomentsOnly) {
  const std::vector<ClassSpec> three{{0.2, {1.0}}, {0.5, {-4.0}}, {0.3, {10.0}}};
  const auto r = lower_bound(three, 1);
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_EQ(r.method, LowerBoundMethod::FirstMoment);
  EXPECT_FALSE(r.attained);
  double sum = 0, mx = 0;
  for (std::size_t i = 0; i < three.size(); ++i) {
    sum += three[i].prior * r.epsilons[i];
    mx = std::max(mx, three[i].prior * r.epsilons[i]);
  }
  EXPECT_DOUBLE_EQ(r.value, sum - mx);
}

TEST(LowerBound, ThreeMomentsMatchTwoMomentValue) {
  const DiscreteMeasure m1{{{-1.0, 0.3}, {0.5, 0.2}, {2.0, 0.5}}};
  const DiscreteMeasure m2{{{1.0, 0.6}, {4.0, 0.4}}};
  const auto s1 = moments_of(m1, 3), s2 = moments_of(m2, 3);
  const std::vector<ClassSpec> classes{{0.5, {s1[1], s1[2], s1[3]}}, {0.5, {s2[1], s2[2], s2[3]}}};
  const auto r2 = lower_bound(classes, 2);
  const auto r3 = lower_bound(classes, 3);
  EXPECT_DOUBLE_EQ(r2.value, r3.value);
  EXPECT_FALSE(r3.attained);
}

TEST(LowerBound, FourMomentsNeverExceedTwoMoments) {
  // Two classes with standard-normal shape moments, means 0 and 2.
  auto normal_moments = [](double mu) {
    return std::vector<double>{mu, mu * mu + 1, mu * mu * mu + 3 * mu, mu * mu * mu * mu + 6 * mu * mu + 3};
  };
  const std::vector<ClassSpec> classes{{0.5, normal_moments(0.0)}, {0.5, normal_moments(2.0)}};
  const auto r2 = lower_bound(classes, 2);
  const auto r4 = lower_bound(classes, 4);
  EXPECT_EQ(r4.method, LowerBoundMethod::Numeric);
  EXPECT_LE(r4.value, r2.value + 1e-9);
  EXPECT_GT(r4.value, 0.0);
  // Symmetric problem: the optimal shift sits at the midpoint.
  EXPECT_NEAR(r4.delta_star, 1.0, 1e-6);
  // At the midpoint each shifted sequence is [1, -+1, 2, -+4, 10]; eps solves det A(2) = 0.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (wcbayes::testing::hankel3_det(1 - mid, 1, 2, 4, 10) >= 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(r4.epsilons[0], lo, 1e-9);
  EXPECT_NEAR(r4.value, 0.5 * lo, 1e-9);
}

TEST(LowerBound, UnequalPriorsUseNumericPath) {
  const std::vector<ClassSpec> pair{mv(0.3, 0, 1), mv(0.7, 3, 2)};
  const auto r = lower_bound(pair, 2);
  EXPECT_EQ(r.method, LowerBoundMethod::Numeric);
  const auto [x, v] = refined_grid_sup([&](double d) { return objective(pair, d); }, -20, 20);
  EXPECT_NEAR(r.value, v, 1e-9);
}

TEST(LowerBound, AllPointMassesGiveZeroWithDiagnostic) {
  const std::vector<ClassSpec> three{mv(0.25, 0, 0), mv(0.25, 1, 0), mv(0.5, 2, 0)};
  const auto r = lower_bound(three, 2);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(LowerBound, Errors) {
  const std::vector<ClassSpec> bad{{0.5, {2.0, 1.0}}, mv(0.5, 0, 1)};
  try {
    lower_bound(bad, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleClass);
  }
  const std::vector<ClassSpec> priors{mv(0.5, 0, 1), mv(0.6, 1, 1)};
  EXPECT_THROW(lower_bound(priors, 2), Error);
  const std::vector<ClassSpec> one{mv(1.0, 0, 1)};
  EXPECT_THROW(lower_bound(one, 2), Error);
  const std::vector<ClassSpec> short_list{{0.5, {1.0}}, mv(0.5, 0, 1)};
  EXPECT_THROW(lower_bound(short_list, 2), Error);
}

TEST(FirstMomentBound, Examples) {
  EXPECT_DOUBLE_EQ(first_moment_bound(std::vector<double>{0.5, 0.5}).value, 0.5);
  EXPECT_DOUBLE_EQ(first_moment_bound(std::vector<double>{0.9, 0.1}).value, 1.0 - 0.9);
  EXPECT_DOUBLE_EQ(first_moment_bound(std::vector<double>{0.25, 0.25, 0.25, 0.25}).value, 0.75);
  EXPECT_FALSE(first_moment_bound(std::vector<double>{0.5, 0.5}).attained);
}

TEST(EqualVarianceMidpoint, Examples) {
  EXPECT_DOUBLE_EQ(equal_variance_midpoint(std::vector<ClassSpec>{mv(0.5, 0, 1), mv(0.5, 2, 1)}), 1.0);
  EXPECT_DOUBLE_EQ(equal_variance_midpoint(std::vector<ClassSpec>{mv(0.5, -3, 2), mv(0.5, -3, 2)}), -3.0);
  try {
    equal_variance_midpoint(std::vector<ClassSpec>{mv(0.5, 0, 1), mv(0.5, 2, 2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
  EXPECT_THROW(equal_variance_midpoint(std::vector<ClassSpec>{mv(0.4, 0, 1), mv(0.6, 2, 1)}), Error);
}

TEST(LowerBound, ManyEqualVarianceClassesPickBetterOfMidpointAndSearch) {
  const std::vector<ClassSpec> three{mv(1.0 / 3, 0, 1), mv(1.0 / 3, 1, 1), mv(1.0 / 3, 5, 1)};
  const auto r = lower_bound(three, 2);
  EXPECT_GE(r.value, objective(three, 2.5));
  EXPECT_EQ(r.method, LowerBoundMethod::Numeric);

  // Two coincident means and a far one: symmetric about the midpoint only when means are {0, 0, ...}.
  const std::vector<ClassSpec> sym{mv(1.0 / 3, -1, 1), mv(1.0 / 3, 0, 1), mv(1.0 / 3, 1, 1)};
  const auto s = lower_bound(sym, 2);
  const auto [x, v] = refined_grid_sup([&](double d) { return objective(sym, d); }, -12, 12);
  EXPECT_NEAR(s.value, v, 1e-9);
}

// Properties

TEST(LowerBoundProperty, WithinTrivialRange) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int G = 2 + trial % 4;
    std::vector<ClassSpec> classes;
    double total = 0;
    std::vector<double> w;
    for (int i = 0; i < G; ++i) w.push_back(uniform(rng, 0.1, 1.0)), total += w.back();
    for (int i = 0; i < G; ++i) classes.push_back(mv(w[static_cast<std::size_t>(i)] / total, uniform(rng, -5, 5), uniform(rng, 0.01, 5)));
    double s = 0;
    for (int i = 0; i + 1 < G; ++i) s += classes[static_cast<std::size_t>(i)].prior;
    classes.back().prior = 1.0 - s;
    const auto r = lower_bound(classes, 2);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, static_cast<double>(G - 1) / G + 1e-12);
    // value = sum p eps - max p eps at delta_star.
    double sum = 0, mx = 0, mn = 1;
    for (int i = 0; i < G; ++i) {
      const double t = classes[static_cast<std::size_t>(i)].prior * r.epsilons[static_cast<std::size_t>(i)];
      sum += t;
      mx = std::max(mx, t);
      mn = std::min(mn, t);
    }
    EXPECT_NEAR(r.value, sum - mx, 1e-12);
    EXPECT_GE(r.value, (G - 1) * mn - 1e-12);
  }
}

TEST(LowerBoundProperty, ObjectiveDominatesMinForm) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<ClassSpec> classes{mv(0.2, uniform(rng, -3, 3), uniform(rng, 0.1, 3)),
                                         mv(0.3, uniform(rng, -3, 3), uniform(rng, 0.1, 3)),
                                         mv(0.5, uniform(rng, -3, 3), uniform(rng, 0.1, 3))};
    for (double d = -6; d <= 6; d += 0.5)
      EXPECT_GE(objective(classes, d), objective(classes, d, ShiftCriterion::MinTerm) - 1e-15);
  }
}

TEST(LowerBoundProperty, TranslationInvariance) {
  Rng rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const auto classes = wcbayes::testing::random_two_class(rng);
    const std::vector<ClassSpec> skewed{mv(0.35, classes[0].gamma1(), classes[0].variance()),
                                        mv(0.65, classes[1].gamma1(), classes[1].variance())};
    for (const auto& set : {classes, skewed}) {
      const double offset = uniform(rng, -10, 10);
      std::vector<ClassSpec> moved;
      for (const auto& c : set) {
        const auto s = shift_moments(c.sequence(2), offset);
        moved.push_back({c.prior, {s[1], s[2]}});
      }
      const auto a = lower_bound(set, 2);
      const auto b = lower_bound(moved, 2);
      EXPECT_NEAR(a.value, b.value, 1e-9);
      EXPECT_NEAR(b.delta_star, a.delta_star - offset, 1e-6);
    }
  }
}

TEST(LowerBoundProperty, EqualVarianceFormulaDecreasesWithSeparation) {
  const double var = 1.7;
  double previous = 1.0;
  for (double d = 0.0; d <= 30.0; d += 0.25) {
    const std::vector<ClassSpec> pair{mv(0.5, 0, var), mv(0.5, d, var)};
    const double value = lower_bound(pair, 2).value;
    EXPECT_NEAR(value, equal_variance_formula(var, d), 1e-12);
    EXPECT_LT(value, previous);
    previous = value;
  }
}
