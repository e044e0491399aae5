#include "dumenu/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "dumenu/error.hpp"
#include "dumenu/oracle.hpp"
#include "dumenu/verification.hpp"

namespace dumenu {

namespace {

constexpr double kMonotoneTol = 1e-10;
constexpr double kAlphaTol = 1e-12;
constexpr double kBisectionWidth = 1e-10;

// Pooling starts at the first node not below theta_alpha; the slack keeps
// bisection noise from splitting a node that sits on the root.
std::size_t first_pooling_node(const TypeGrid& grid, double t_alpha) {
  const double slack = 1e-9 * (grid.hi() - grid.lo());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= t_alpha - slack) return i;
  }
  return grid.size();
}

CheckResult row_monotone(const RowMatrix& values, const Scenario& scenario, std::size_t rows,
                         const char* name) {
  CheckResult c{name};
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j) {
      c.record(values(i + 1, j) - values(i, j), kMonotoneTol, scenario.types()[i],
               scenario.losses().midpoint(j));
    }
  }
  return c;
}

RetentionSchedule slopes_from_profile(const JProfile& profile, std::size_t pooled_from,
                                      double tie_tol) {
  RowMatrix slopes(profile.values.rows(), profile.values.cols(), 0.0);
  for (std::size_t i = 0; i < std::min(pooled_from, slopes.rows()); ++i) {
    for (std::size_t j = 0; j < slopes.cols(); ++j) {
      slopes(i, j) = profile.values(i, j) < -tie_tol ? 1.0 : 0.0;
    }
  }
  return RetentionSchedule(std::move(slopes));
}

SynthesisResult assemble(const Scenario& scenario, double alpha, Regime regime,
                         std::optional<double> t_alpha, JProfile profile,
                         RetentionSchedule retention, PremiumSchedule premia,
                         std::size_t separating_rows, AssumptionReport assumptions) {
  Menu menu(scenario.types(), scenario.losses(), std::move(retention), std::move(premia));
  CheckResult mono = row_monotone(profile.values, scenario, separating_rows, "j_monotone");
  IRReport ir = verify_ir(menu, scenario);
  const double w = social_welfare(menu, alpha, scenario);
  return SynthesisResult{std::move(menu), regime, alpha,       t_alpha, std::move(profile),
                         std::move(mono), std::move(ir), w, std::move(assumptions)};
}

AssumptionReport gate(const Scenario& scenario, OrderingMode mode,
                      const SynthesisOptions& options) {
  AssumptionReport a = check_scenario_assumptions(scenario, mode);
  if (options.strict && !a.passed) {
    std::string failed;
    for (const auto& c : a.checks) {
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    throw AssumptionViolated("scenario '" + scenario.name() + "' fails " + failed);
  }
  return a;
}

}  // namespace

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::LayeredFull:
      return "LayeredFull";
    case Regime::LayeredWithPooling:
      return "LayeredWithPooling";
    case Regime::FullCoverageZeroPremium:
      return "FullCoverageZeroPremium";
    case Regime::InsurerOnly:
      return "InsurerOnly";
    case Regime::AgentOnly:
      return "AgentOnly";
  }
  return "unknown";
}

double j_eta(double theta, double l, double alpha, const Scenario& scenario) {
  const Preferences& prefs = scenario.prefs();
  const double f = prefs.loss.value(theta, l);
  const double wedge = (1.0 - alpha) * (prefs.insurer.value(f) - prefs.agent.value(theta, f));
  if (theta >= scenario.mu().hi()) return wedge;
  const double rent = prefs.agent.partial_theta(theta, f) +
                      prefs.agent.partial_t(theta, f) * prefs.loss.partial_theta(theta, l);
  const double bracket =
      (1.0 - alpha) - alpha * survival_ratio(scenario.eta(), scenario.mu(), theta);
  return wedge + inverse_hazard(scenario.mu(), theta) * rent * bracket;
}

double j_insurer(double theta, double l, const Scenario& scenario) {
  const Preferences& prefs = scenario.prefs();
  const double f = prefs.loss.value(theta, l);
  const double wedge = prefs.insurer.value(f) - prefs.agent.value(theta, f);
  if (theta >= scenario.mu().hi()) return wedge;
  const double rent = prefs.agent.partial_theta(theta, f) +
                      prefs.agent.partial_t(theta, f) * prefs.loss.partial_theta(theta, l);
  return wedge + inverse_hazard(scenario.mu(), theta) * rent;
}

JProfile continuum_profile(double alpha, const Scenario& scenario) {
  const std::size_t n = scenario.types().size();
  const std::size_t m = scenario.losses().cells();
  JProfile out{RowMatrix(n, m), alpha == 0.0 ? JProfile::Kind::InsurerOnly
                                              : JProfile::Kind::WithEta};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double theta = scenario.types()[i];
      const double l = scenario.losses().midpoint(j);
      out.values(i, j) =
          alpha == 0.0 ? j_insurer(theta, l, scenario) : j_eta(theta, l, alpha, scenario);
    }
  }
  return out;
}

JProfile grid_profile(double alpha, const Scenario& scenario) {
  const std::size_t n = scenario.types().size();
  const std::size_t m = scenario.losses().cells();
  const auto& mu = scenario.mu_mass();
  const auto& eta = scenario.eta_mass();
  const RowMatrix& phi = scenario.phi();
  const RowMatrix& psi = scenario.psi();

  // tail[k] = sum over i > k of (1-a) mu_i - a eta_i: the weight with which the
  // rent earned on interval (k, k+1) enters welfare.
  std::vector<double> tail(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) {
    tail[k] = tail[k + 1] + (1.0 - alpha) * mu[k + 1] - alpha * eta[k + 1];
  }

  JProfile out{RowMatrix(n, m), alpha == 0.0 ? JProfile::Kind::InsurerOnly
                                              : JProfile::Kind::WithEta};
  for (std::size_t k = 0; k < n; ++k) {
    if (!(mu[k] > 0.0)) throw DegenerateDensity("grid virtual value needs positive type mass");
    for (std::size_t j = 0; j < m; ++j) {
      double coeff = (1.0 - alpha) * mu[k] * (psi(k, j) - phi(k, j));
      if (k + 1 < n) coeff += 0.5 * tail[k] * (phi(k + 1, j) - phi(k, j));
      if (k > 0) coeff += 0.5 * tail[k - 1] * (phi(k, j) - phi(k - 1, j));
      out.values(k, j) = -coeff / mu[k];
    }
  }
  return out;
}

double theta_alpha(double alpha, const Scenario& scenario) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("theta_alpha needs alpha in (0, 1]");
  const TypeMeasure& mu = scenario.mu();
  const TypeMeasure& eta = scenario.eta();
  const AssumptionReport hazard = check_hazard_dominance(mu, eta, scenario.types());
  if (!hazard.passed) {
    throw AssumptionViolated("theta_alpha: hazard-rate dominance of mu over eta fails");
  }
  const double target = (1.0 - alpha) / alpha;
  double lo = mu.lo();
  double hi = mu.hi();
  if (survival_ratio(eta, mu, lo) >= target) return lo;
  if (survival_ratio(eta, mu, hi) < target) return hi;
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (survival_ratio(eta, mu, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Regime classify_regime(double alpha, const Scenario& scenario) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (alpha == 0.0) return Regime::InsurerOnly;
  if (alpha == 1.0) return Regime::AgentOnly;
  if (alpha > 0.5) return Regime::FullCoverageZeroPremium;
  if (alpha < boundary_alpha(scenario.mu(), scenario.eta()) - kAlphaTol) {
    return Regime::LayeredFull;
  }
  return Regime::LayeredWithPooling;
}

PremiumSchedule optimal_premiums(const RetentionSchedule& retention, const Scenario& scenario) {
  const double cap = max_ir_premium(scenario.types()[0], retention.row(0), scenario);
  return premium_from_ic(retention, cap, scenario);
}

SynthesisResult synthesize(double alpha, const Scenario& scenario, const SynthesisOptions& options) {
  return synthesize(alpha, scenario, scenario.mode(), options);
}

SynthesisResult synthesize(double alpha, const Scenario& scenario, OrderingMode mode,
                           const SynthesisOptions& options) {
  const Regime regime = classify_regime(alpha, scenario);
  if (regime == Regime::InsurerOnly) return synthesize_insurer_only(scenario, options);
  if (regime == Regime::AgentOnly) {
    gate(scenario, mode, options);
    return synthesize_agent_only(scenario);
  }
  AssumptionReport assumptions = gate(scenario, mode, options);
  const std::size_t n = scenario.types().size();
  const std::size_t m = scenario.losses().cells();

  if (regime == Regime::FullCoverageZeroPremium) {
    JProfile profile = continuum_profile(alpha, scenario);
    return assemble(scenario, alpha, regime, std::nullopt, std::move(profile),
                    RetentionSchedule::constant(n, m, 0.0), PremiumSchedule{std::vector<double>(n, 0.0)},
                    0, std::move(assumptions));
  }

  std::optional<double> t_alpha;
  std::size_t pooled_from = n;
  if (regime == Regime::LayeredWithPooling) {
    t_alpha = theta_alpha(alpha, scenario);
    pooled_from = first_pooling_node(scenario.types(), *t_alpha);
  }
  JProfile profile = grid_profile(alpha, scenario);
  RetentionSchedule retention = slopes_from_profile(profile, pooled_from, options.tie_tol);
  PremiumSchedule premia = optimal_premiums(retention, scenario);
  return assemble(scenario, alpha, regime, t_alpha, std::move(profile), std::move(retention),
                  std::move(premia), pooled_from, std::move(assumptions));
}

SynthesisResult synthesize_insurer_only(const Scenario& scenario, const SynthesisOptions& options) {
  AssumptionReport assumptions = gate(scenario, scenario.mode(), options);
  JProfile profile = grid_profile(0.0, scenario);
  const std::size_t n = scenario.types().size();
  RetentionSchedule retention = slopes_from_profile(profile, n, options.tie_tol);
  PremiumSchedule premia = optimal_premiums(retention, scenario);
  return assemble(scenario, 0.0, Regime::InsurerOnly, std::nullopt, std::move(profile),
                  std::move(retention), std::move(premia), n, std::move(assumptions));
}

SynthesisResult synthesize_agent_only(const Scenario& scenario) {
  const std::size_t n = scenario.types().size();
  const std::size_t m = scenario.losses().cells();
  return assemble(scenario, 1.0, Regime::AgentOnly, std::nullopt, continuum_profile(1.0, scenario),
                  RetentionSchedule::constant(n, m, 0.0),
                  PremiumSchedule{std::vector<double>(n, 0.0)}, 0,
                  check_scenario_assumptions(scenario, scenario.mode()));
}

AssumptionReport check_scenario_assumptions(const Scenario& scenario, OrderingMode mode) {
  std::vector<double> loss_probe(scenario.losses().nodes().begin() + 1,
                                 scenario.losses().nodes().end());
  AssumptionReport prefs = check_preference_assumptions(scenario.prefs(), mode,
                                                        scenario.types().nodes(), loss_probe);
  AssumptionReport hazard =
      check_hazard_dominance(scenario.mu(), scenario.eta(), scenario.types());
  AssumptionReport out;
  out.passed = prefs.passed && hazard.passed;
  out.checks = prefs.checks;
  out.checks.insert(out.checks.end(), hazard.checks.begin(), hazard.checks.end());
  out.violating_thetas = prefs.violating_thetas;
  for (double t : hazard.violating_thetas) {
    if (std::find(out.violating_thetas.begin(), out.violating_thetas.end(), t) ==
        out.violating_thetas.end()) {
      out.violating_thetas.push_back(t);
    }
  }
  std::sort(out.violating_thetas.begin(), out.violating_thetas.end());
  return out;
}

ConditionsReport check_sufficient_conditions(const Scenario& scenario, double alpha,
                                             OrderingMode mode) {
  const TypeMeasure& mu = scenario.mu();
  const TypeMeasure& eta = scenario.eta();
  const Preferences& prefs = scenario.prefs();
  const TypeGrid& types = scenario.types();
  const LossGrid& losses = scenario.losses();
  constexpr double tol = 1e-10;

  CheckResult c1_lower{"C1_inverse_hazard_slope_ge_0"};
  CheckResult c1_upper{"C1_inverse_hazard_slope_le_1"};
  CheckResult c2{"C2_loss_convex_in_type"};
  CheckResult c3{"C3_distortion_convex_in_type"};
  CheckResult c4{"C4_distortion_convex_in_t"};
  CheckResult c5_sub{"C5_distortion_submodular"};
  CheckResult c5_bound{"C5_cross_bound_insurer"};
  CheckResult c5_eta{"C5_cross_bound_eta"};

  for (std::size_t i = 0; i + 1 < types.size(); ++i) {
    const double theta = types[i];
    const double q = mu.density(theta);
    const double sbar = mu.survival(theta);
    const double inv_h = sbar / q;
    // (Qbar/q)' = -1 - Qbar q' / q^2
    const double inv_h_slope = -1.0 - sbar * mu.density_derivative(theta) / (q * q);
    c1_lower.record(inv_h_slope, tol, theta);
    c1_upper.record(1.0 - inv_h_slope, tol, theta);
    // (Qbar_eta / q)' = (-q_eta q - Qbar_eta q') / q^2
    const double eta_inv = eta.survival(theta) / q;
    const double eta_inv_slope =
        (-eta.density(theta) * q - eta.survival(theta) * mu.density_derivative(theta)) / (q * q);

    for (std::size_t j = 0; j < losses.cells(); ++j) {
      const double l = losses.midpoint(j);
      const double f = prefs.loss.value(theta, l);
      const double df = prefs.loss.partial_theta(theta, l);
      const double mixed = prefs.agent.partial2_mixed(theta, f);
      c2.record(prefs.loss.partial2_theta(theta, l), tol, theta, l);
      c3.record(prefs.agent.partial2_theta(theta, f), tol, theta, l);
      c4.record(prefs.agent.partial2_t(theta, f), tol, theta, l);
      c5_sub.record(-mixed, tol, theta, l);
      c5_bound.record(-prefs.insurer.derivative(f) - inv_h * mixed, tol, theta, l);
      if (mode == OrderingMode::LessAverseLargerLoss) {
        const double rent = prefs.agent.partial_theta(theta, f) + prefs.agent.partial_t(theta, f) * df;
        c5_eta.record(-eta_inv * df * mixed - eta_inv_slope * rent, tol, theta, l);
      }
    }
  }

  ConditionsReport report{mode, alpha, {}, true, {}, {}};
  report.conditions = {c1_lower, c1_upper, c2, c3, c4, c5_sub, c5_bound};
  if (mode == OrderingMode::LessAverseLargerLoss) report.conditions.push_back(c5_eta);
  for (const auto& c : report.conditions) report.sufficient_passed = report.sufficient_passed && c.passed;

  std::size_t rows = types.size();
  if (alpha > 0.0 && alpha <= 0.5 &&
      classify_regime(alpha, scenario) == Regime::LayeredWithPooling) {
    rows = first_pooling_node(types, theta_alpha(alpha, scenario));
  }
  const JProfile cont = continuum_profile(alpha, scenario);
  report.observed_monotone = row_monotone(cont.values, scenario, rows, "observed_j_monotone");
  if (alpha <= 0.5) {
    const JProfile grid = grid_profile(alpha, scenario);
    report.grid_monotone = row_monotone(grid.values, scenario, rows, "grid_j_monotone");
  } else {
    report.grid_monotone = CheckResult{"grid_j_monotone"};
  }
  return report;
}

}  // namespace dumenu
