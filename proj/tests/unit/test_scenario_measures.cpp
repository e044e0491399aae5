#include <gtest/gtest.h>

#include <cmath>

#include "dumenu/error.hpp"
#include "dumenu/scenario_measures.hpp"

using namespace dumenu;

TEST(TypeGrid, UniformNodesAndTrapezoidWeights) {
  const TypeGrid g(0.0, 1.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[0], 0.0);
  EXPECT_DOUBLE_EQ(g[4], 1.0);
  EXPECT_DOUBLE_EQ(g.step(), 0.25);
  const auto w = g.trapezoid_weights();
  EXPECT_DOUBLE_EQ(w[0], 0.125);
  EXPECT_DOUBLE_EQ(w[2], 0.25);
  double total = 0.0;
  for (double x : w) total += x;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(TypeGrid, RejectsTooFewNodes) { EXPECT_THROW(TypeGrid(0.0, 1.0, 2), Error); }

TEST(TypeGrid, CoarseGridsForSmallInstances) {
  const TypeGrid one = TypeGrid::coarse(0.0, 1.0, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0], 1.0);
  const TypeGrid two = TypeGrid::coarse(0.0, 1.0, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_DOUBLE_EQ(two[0], 0.0);
  EXPECT_DOUBLE_EQ(two[1], 1.0);
}

TEST(TypeMeasure, UniformHazardRate) {
  const auto mu = TypeMeasure::uniform(0.0, 1.0);
  EXPECT_NEAR(hazard_rate(mu, 0.25), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(inverse_hazard(mu, 0.4), 0.6, 1e-12);
  EXPECT_DOUBLE_EQ(inverse_hazard(mu, 1.0), 0.0);
}

TEST(TypeMeasure, HazardAtTopIsDegenerate) {
  const auto mu = TypeMeasure::uniform(0.0, 1.0);
  EXPECT_THROW(hazard_rate(mu, 1.0), DegenerateSurvival);
}

TEST(TypeMeasure, PowerFamilyIntegratesToOne) {
  const auto eta = TypeMeasure::power(0.0, 1.0, 2.0);
  // density 3 theta^2, cdf theta^3
  EXPECT_NEAR(eta.density(0.5), 0.75, 1e-12);
  EXPECT_NEAR(eta.cdf(0.5), 0.125, 1e-12);
  EXPECT_NEAR(eta.survival(0.5), 0.875, 1e-12);
  const auto r = TypeMeasure::power_reflected(0.0, 1.0, 1.0);
  // density 2 (1 - theta)
  EXPECT_NEAR(r.density(0.25), 1.5, 1e-12);
  EXPECT_NEAR(r.survival(0.5), 0.25, 1e-12);
}

TEST(SurvivalRatio, LinearEtaOverUniform) {
  const auto mu = TypeMeasure::uniform(0.0, 1.0);
  const auto eta = TypeMeasure::power(0.0, 1.0, 1.0);
  // (1 - theta^2) / (1 - theta) = 1 + theta, limit 2 at the top
  EXPECT_NEAR(survival_ratio(eta, mu, 0.5), 1.5, 1e-12);
  EXPECT_NEAR(survival_ratio(eta, mu, 1.0), 2.0, 1e-9);
}

TEST(BoundaryAlpha, ClosedForms) {
  const auto mu = TypeMeasure::uniform(0.0, 1.0);
  EXPECT_NEAR(boundary_alpha(mu, TypeMeasure::power(0.0, 1.0, 1.0)), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(boundary_alpha(mu, TypeMeasure::power(0.0, 1.0, 2.0)), 0.25, 1e-12);
  EXPECT_NEAR(boundary_alpha(mu, mu), 0.5, 1e-12);
}

TEST(HazardDominance, HoldsForIncreasingEtaDensity) {
  const TypeGrid g(0.0, 1.0, 41);
  const auto mu = TypeMeasure::uniform(0.0, 1.0);
  EXPECT_TRUE(check_hazard_dominance(mu, TypeMeasure::power(0.0, 1.0, 1.0), g).passed);
  EXPECT_TRUE(check_hazard_dominance(mu, mu, g).passed);
}

TEST(HazardDominance, FailsWhenEtaPutsMassLow) {
  const TypeGrid g(0.0, 1.0, 41);
  const auto mu = TypeMeasure::uniform(0.0, 1.0);
  const auto report = check_hazard_dominance(mu, TypeMeasure::power_reflected(0.0, 1.0, 1.0), g);
  EXPECT_FALSE(report.passed);
  EXPECT_FALSE(report.violating_thetas.empty());
}
