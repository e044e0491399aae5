#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dumenu/matrix.hpp"
#include "dumenu/menus.hpp"
#include "dumenu/report.hpp"
#include "dumenu/scenario.hpp"

namespace dumenu {

enum class Regime {
  LayeredFull,
  LayeredWithPooling,
  FullCoverageZeroPremium,
  InsurerOnly,
  AgentOnly,
};

const char* to_string(Regime regime);

/// Virtual value sampled at (type node, loss-cell midpoint).
struct JProfile {
  enum class Kind { WithEta, InsurerOnly };
  RowMatrix values;
  Kind kind = Kind::WithEta;
};

struct SynthesisOptions {
  /// |J| at or below this gets slope 0.
  double tie_tol = 1e-9;
  /// Throw AssumptionViolated when the scenario's assumption checks fail.
  bool strict = false;
};

struct SynthesisResult {
  Menu menu;
  Regime regime;
  double alpha;
  std::optional<double> theta_alpha;
  /// Virtual value that fixed the slopes.
  JProfile profile;
  /// theta -> J(theta, l) non-decreasing cell by cell over the separating rows.
  CheckResult j_monotone;
  IRReport ir_status;
  double welfare = 0.0;
  /// Assumption checks for the scenario's ordering mode (informational unless strict).
  AssumptionReport assumptions;
};

/// Continuum virtual value
///   (1-a)[g_In(F) - g(F)] + (Qbar/q) * d/dtheta g(F) * [(1-a) - a Qbar_eta/Qbar].
/// At theta_hi the information-rent term is dropped.
double j_eta(double theta, double l, double alpha, const Scenario& scenario);

/// j_eta at alpha = 0; independent of eta.
double j_insurer(double theta, double l, const Scenario& scenario);

JProfile continuum_profile(double alpha, const Scenario& scenario);

/// Grid virtual value: minus the coefficient of each slope in the discretized
/// welfare (premia substituted from premium_from_ic with the lowest type's
/// participation binding), per unit of type mass and loss width. Its sign is
/// the exact pointwise maximizer on the grid and it tends to j_eta under refinement.
JProfile grid_profile(double alpha, const Scenario& scenario);

/// Root of Qbar_eta/Qbar = (1-alpha)/alpha by bisection (width 1e-10).
/// Ratio below the target everywhere gives theta_hi, above everywhere theta_lo.
/// Throws AssumptionViolated if hazard dominance fails on the scenario grid.
double theta_alpha(double alpha, const Scenario& scenario);

/// Regime tag for alpha in [0, 1], without building a menu.
Regime classify_regime(double alpha, const Scenario& scenario);

/// Premia from premium_from_ic with the lowest type's participation cap as base.
PremiumSchedule optimal_premiums(const RetentionSchedule& retention, const Scenario& scenario);

SynthesisResult synthesize(double alpha, const Scenario& scenario, OrderingMode mode,
                           const SynthesisOptions& options = {});
SynthesisResult synthesize(double alpha, const Scenario& scenario,
                           const SynthesisOptions& options = {});
SynthesisResult synthesize_insurer_only(const Scenario& scenario,
                                        const SynthesisOptions& options = {});
SynthesisResult synthesize_agent_only(const Scenario& scenario);

struct ConditionsReport {
  OrderingMode mode;
  double alpha;
  /// C1 .. C5 (with sub-checks); sufficient, not necessary.
  std::vector<CheckResult> conditions;
  bool sufficient_passed = true;
  /// Direct test of theta -> J(theta, l) on the grid (continuum formula).
  CheckResult observed_monotone;
  /// Same test for the grid virtual value that drives synthesis.
  CheckResult grid_monotone;
};

ConditionsReport check_sufficient_conditions(const Scenario& scenario, double alpha,
                                             OrderingMode mode);

/// Assumption checks for the scenario's preferences and measures under mode.
AssumptionReport check_scenario_assumptions(const Scenario& scenario, OrderingMode mode);

}  // namespace dumenu
