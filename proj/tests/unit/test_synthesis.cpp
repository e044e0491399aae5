#include <gtest/gtest.h>

#include <cmath>

#include "../support/reference.hpp"
#include "dumenu/builtin.hpp"
#include "dumenu/error.hpp"
#include "dumenu/oracle.hpp"
#include "dumenu/synthesis.hpp"

using namespace dumenu;

TEST(Regime, SweepOnLinearEta) {
  const Scenario s2 = builtin_scenario("s2");
  EXPECT_EQ(classify_regime(0.0, s2), Regime::InsurerOnly);
  EXPECT_EQ(classify_regime(0.1, s2), Regime::LayeredFull);
  EXPECT_EQ(classify_regime(1.0 / 3.0, s2), Regime::LayeredWithPooling);
  EXPECT_EQ(classify_regime(0.4, s2), Regime::LayeredWithPooling);
  EXPECT_EQ(classify_regime(0.5, s2), Regime::LayeredWithPooling);
  EXPECT_EQ(classify_regime(0.6, s2), Regime::FullCoverageZeroPremium);
  EXPECT_EQ(classify_regime(1.0, s2), Regime::AgentOnly);
}

TEST(Regime, EqualWeightsPoolFromTheBottomAtOneHalf) {
  const Scenario s1 = builtin_scenario("s1");
  EXPECT_EQ(classify_regime(0.25, s1), Regime::LayeredFull);
  EXPECT_NEAR(theta_alpha(0.5, s1), 0.0, 1e-12);
}

TEST(ThetaAlpha, SolvesSurvivalRatioEquation) {
  const Scenario s2 = builtin_scenario("s2");
  // 1 + theta = (1 - alpha) / alpha
  EXPECT_NEAR(theta_alpha(0.4, s2), 0.5, 1e-8);
  EXPECT_NEAR(theta_alpha(0.45, s2), 0.55 / 0.45 - 1.0, 1e-8);
  EXPECT_NEAR(theta_alpha(1.0 / 3.0, s2), 1.0, 1e-8);
}

TEST(VirtualValue, InsurerOnlyFormulaForS1) {
  const Scenario s1 = builtin_scenario("s1");
  const auto fam = ref::s1();
  // J = F - g(F) + (1 - theta) * d/dtheta g(F) with identity insurer
  for (double theta : {0.1, 0.5, 0.8}) {
    for (double l : {0.2, 0.6}) {
      const double F = std::pow(l, 1.0 + theta);
      const double expected = F - std::pow(l, fam.exponent(theta)) + (1.0 - theta) * fam.rent(theta, l);
      EXPECT_NEAR(j_insurer(theta, l, s1), expected, 1e-10);
      EXPECT_NEAR(j_eta(theta, l, 0.0, s1), expected, 1e-10);
    }
  }
}

TEST(VirtualValue, EtaWeightShiftsRentTerm) {
  const Scenario s1 = builtin_scenario("s1");
  const auto fam = ref::s1();
  const double theta = 0.4;
  const double l = 0.5;
  const double alpha = 0.25;
  const double F = std::pow(l, 1.0 + theta);
  // eta = mu: ratio 1, rent factor (1 - 2 alpha)
  const double expected = (1.0 - alpha) * (F - std::pow(l, fam.exponent(theta))) +
                          (1.0 - theta) * fam.rent(theta, l) * (1.0 - 2.0 * alpha);
  EXPECT_NEAR(j_eta(theta, l, alpha, s1), expected, 1e-10);
}

TEST(Synthesis, TopTypeIsFullyInsured) {
  const Scenario s1 = builtin_scenario("s1");
  for (double alpha : {0.0, 0.25}) {
    const auto r = synthesize(alpha, s1);
    const auto top = r.menu.retention.row(s1.types().size() - 1);
    for (double s : top) EXPECT_EQ(s, 0.0);
  }
}

TEST(Synthesis, LowestTypeParticipatesWithoutSurplus) {
  const Scenario s1 = builtin_scenario("s1");
  const auto fam = ref::s1();
  const auto r = synthesize(0.25, s1);
  const double u = ref::utility(fam, 0.0, r.menu.retention.row(0), r.menu.premium.premia[0]);
  EXPECT_NEAR(u, ref::no_insurance_grid(fam, 0.0, s1.losses().cells()), 1e-12);
}

TEST(Synthesis, AgentWeightAboveHalfGivesFreeFullCover) {
  for (const auto& name : builtin_scenario_names()) {
    const Scenario sc = builtin_scenario(name, 21, 50);
    const auto r = synthesize(0.75, sc);
    EXPECT_EQ(r.regime, Regime::FullCoverageZeroPremium);
    for (double s : r.menu.retention.slopes().data()) EXPECT_EQ(s, 0.0);
    for (double p : r.menu.premium.premia) EXPECT_EQ(p, 0.0);
    EXPECT_FALSE(r.ir_status.p2_ok) << name;
  }
}

TEST(Synthesis, AgentOnlyRoute) {
  const auto r = synthesize(1.0, builtin_scenario("s1", 11, 20));
  EXPECT_EQ(r.regime, Regime::AgentOnly);
  for (double p : r.menu.premium.premia) EXPECT_EQ(p, 0.0);
}

TEST(Synthesis, PooledRowsAreFullyInsured) {
  const Scenario s2 = builtin_scenario("s2");
  const auto r = synthesize(0.4, s2);
  ASSERT_TRUE(r.theta_alpha.has_value());
  for (std::size_t i = 0; i < s2.types().size(); ++i) {
    if (s2.types()[i] < *r.theta_alpha) continue;
    for (double s : r.menu.retention.row(i)) EXPECT_EQ(s, 0.0) << "theta " << s2.types()[i];
  }
}

TEST(Synthesis, StrictModeRejectsViolatedAssumptions) {
  const Scenario bad("bad", TypeGrid(0.0, 1.0, 11), LossGrid(1.0, 20), TypeMeasure::uniform(0.0, 1.0),
                     TypeMeasure::uniform(0.0, 1.0),
                     {DistortionFamily::power(1.0, 0.5), InsurerDistortion::power(2.0),
                      LossFamily::power(1.0, 1.0)});
  SynthesisOptions strict;
  strict.strict = true;
  EXPECT_THROW(synthesize(0.25, bad, strict), AssumptionViolated);
  const auto lenient = synthesize(0.25, bad);
  EXPECT_FALSE(lenient.assumptions.passed);
}

TEST(Synthesis, MatchesWelfareMaximumOnTinyGrid) {
  // 2 types x 2 cells: every {0, 1/2, 1} assignment is enumerated by the oracle
  const Scenario s1 = builtin_scenario("s1");
  const auto inst = SmallInstance::from(s1, 2, 2);
  for (double alpha : {0.0, 0.25}) {
    const auto syn = synthesize(alpha, inst.scenario);
    const auto best = enumerate_optimum(inst, alpha, 1);
    EXPECT_NEAR(syn.welfare, best.max_welfare, 1e-12);
  }
}

TEST(Conditions, ReportsEveryCondition) {
  const auto c = check_sufficient_conditions(builtin_scenario("s1"), 0.25,
                                             OrderingMode::MoreAverseLargerLoss);
  for (const char* name : {"C1_inverse_hazard_slope_ge_0", "C1_inverse_hazard_slope_le_1",
                           "C2_loss_convex_in_type", "C3_distortion_convex_in_type",
                           "C4_distortion_convex_in_t", "C5_distortion_submodular"}) {
    bool found = false;
    for (const auto& x : c.conditions) found = found || x.name == name;
    EXPECT_TRUE(found) << name;
  }
  // uniform mu: inverse hazard 1 - theta has slope -1, so C1 fails its lower bound
  for (const auto& x : c.conditions) {
    if (x.name == "C1_inverse_hazard_slope_ge_0") EXPECT_FALSE(x.passed);
  }
}
