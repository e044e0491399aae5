#include "dumenu/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "dumenu/error.hpp"
#include "dumenu/oracle.hpp"

namespace dumenu {

namespace {

constexpr double kPropertyTol = 1e-9;
constexpr double kIndifferenceTol = 1e-8;
constexpr double kZeroUtilityTol = 1e-8;
constexpr double kCacheTol = 1e-12;

enum class RowKind { Full, Zero, Partial };

RowKind classify_row(std::span<const double> r) {
  const bool all_zero = std::all_of(r.begin(), r.end(), [](double s) { return s == 0.0; });
  if (all_zero) return RowKind::Full;
  const bool all_one = std::all_of(r.begin(), r.end(), [](double s) { return s == 1.0; });
  return all_one ? RowKind::Zero : RowKind::Partial;
}

const char* row_name(RowKind k) {
  switch (k) {
    case RowKind::Full:
      return "full";
    case RowKind::Zero:
      return "zero";
    case RowKind::Partial:
      return "partial";
  }
  return "partial";
}

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

ICReport verify_ic(const Menu& menu, const Scenario& scenario, double tol) {
  require_same_grids(menu, scenario);
  const std::size_t n = menu.types.size();
  const LossGrid& grid = scenario.losses();
  // cache(i, k) = int phi_i r_k dl, the retained-loss cost of type i under contract k
  RowMatrix cache(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      cache(i, k) = cell_dot(scenario.phi().row(i), menu.retention.row(k), grid);
    }
  }

  ICReport report;
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int s = 0; s < 5; ++s) {
    const std::size_t i = pick(rng);
    const std::size_t k = pick(rng);
    const double direct = agent_utility(menu.types[i], menu.retention.row(k),
                                        menu.premium.premia[k], scenario.prefs(), grid);
    const double cached = -menu.premium.premia[k] - cache(i, k);
    if (std::abs(direct - cached) > kCacheTol * std::max(1.0, std::abs(direct))) {
      report.cache_consistent = false;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double own = -menu.premium.premia[i] - cache(i, i);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      ++report.pairs_checked;
      const double other = -menu.premium.premia[k] - cache(i, k);
      const double gain = other - own;
      report.worst_gain = std::max(report.worst_gain, gain);
      if (gain > tol) {
        report.violations.push_back({"ic", menu.types[i], menu.types[k], std::nullopt, gain});
      }
    }
  }
  return report;
}

IRReport verify_ir(const Menu& menu, const Scenario& scenario, double tol) {
  require_same_grids(menu, scenario);
  const std::size_t n = menu.types.size();
  IRReport report;
  report.p1_margin.resize(n);
  report.p1_ok.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cap = max_ir_premium(menu.types[i], menu.retention.row(i), scenario);
    const double margin = cap - menu.premium.premia[i];
    report.p1_margin[i] = margin;
    report.p1_ok[i] = margin >= -tol;
    if (i == 0 || margin < report.p1_worst) report.p1_worst = margin;
    report.p1_passed = report.p1_passed && report.p1_ok[i];
  }
  report.lowest_type_p1 = report.p1_ok[0];
  report.p2_value = aggregate_insurer_utility(menu, scenario);
  report.p2_ok = report.p2_value >= -tol;
  return report;
}

const CheckResult* PropertyReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const CheckResult& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

PropertyReport verify_optimal_properties(const SynthesisResult& result, const Scenario& scenario) {
  const Menu& menu = result.menu;
  require_same_grids(menu, scenario);
  const std::size_t n = menu.types.size();
  const std::size_t m = menu.losses.cells();
  const TypeGrid& types = menu.types;
  const LossGrid& losses = menu.losses;
  PropertyReport report;

  CheckResult slopes{"slopes_nonincreasing"};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      slopes.record(menu.retention.slope(i, j) - menu.retention.slope(i + 1, j), 1e-12,
                    types[i], losses.midpoint(j));
    }
  }

  CheckResult premium{"premium_nondecreasing"};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    premium.record(menu.premium.premia[i + 1] - menu.premium.premia[i], kPropertyTol, types[i]);
  }

  CheckResult top{"top_type_full_coverage"};
  for (std::size_t j = 0; j < m; ++j) {
    top.record(-std::abs(menu.retention.slope(n - 1, j)), 0.0, types[n - 1], losses.midpoint(j));
  }

  CheckResult lowest{"lowest_type_indifferent"};
  const bool pooled_regime = result.regime == Regime::FullCoverageZeroPremium ||
                             result.regime == Regime::AgentOnly;
  if (!pooled_regime) {
    const double u = agent_utility(types[0], menu.retention.row(0), menu.premium.premia[0],
                                   scenario.prefs(), losses);
    const double u0 = no_insurance_utility(types[0], scenario.prefs(), losses);
    lowest.record(-std::abs(u - u0), kIndifferenceTol, types[0]);
  }

  const std::vector<double> u = agent_utilities(menu, scenario);
  CheckResult agent{"agent_utility_nonincreasing"};
  for (std::size_t i = 0; i + 1 < n; ++i) agent.record(u[i] - u[i + 1], kPropertyTol, types[i]);

  // Insurer utility profile: non-increasing across full-coverage rows, zero on
  // zero-coverage rows, non-decreasing across partial rows where the pointwise
  // sufficient inequality holds.
  const std::vector<double> v = insurer_utilities(menu, scenario);
  std::vector<RowKind> kinds(n);
  for (std::size_t i = 0; i < n; ++i) {
    kinds[i] = classify_row(menu.retention.row(i));
    report.row_class.emplace_back(row_name(kinds[i]));
  }
  CheckResult insurer{"insurer_utility_profile"};
  const Preferences& prefs = scenario.prefs();
  const double h = types.step();
  for (std::size_t i = 0; i < n; ++i) {
    if (kinds[i] == RowKind::Zero && !pooled_regime) {
      insurer.record(-std::abs(v[i]), kZeroUtilityTol, types[i]);
    }
    if (i + 1 >= n || kinds[i] != kinds[i + 1]) continue;
    if (kinds[i] == RowKind::Full) {
      insurer.record(v[i] - v[i + 1], kPropertyTol, types[i]);
    } else if (kinds[i] == RowKind::Partial) {
      bool holds = true;
      for (std::size_t j = 0; j < m && holds; ++j) {
        const double theta = types[i];
        const double l = losses.midpoint(j);
        const double f = prefs.loss.value(theta, l);
        const double dr = (menu.retention.slope(i + 1, j) - menu.retention.slope(i, j)) / h;
        const double lhs = (prefs.agent.value(theta, f) - prefs.insurer.value(f)) * dr;
        const double rhs = -prefs.insurer.derivative(f) * prefs.loss.partial_theta(theta, l) *
                           (1.0 - menu.retention.slope(i, j));
        holds = lhs >= rhs - kPropertyTol;
      }
      if (holds) insurer.record(v[i + 1] - v[i], kPropertyTol, types[i]);
    }
  }

  report.checks = {slopes, premium, top, lowest, agent, insurer};

  const ConditionsReport cond = check_sufficient_conditions(scenario, result.alpha, scenario.mode());
  auto cond_passed = [&](const std::string& name) {
    for (const auto& c : cond.conditions) {
      if (c.name == name) return c.passed;
    }
    return false;
  };
  if (cond_passed("C5_distortion_submodular") && cond_passed("C3_distortion_convex_in_type") &&
      cond_passed("C4_distortion_convex_in_t") && cond_passed("C2_loss_convex_in_type")) {
    CheckResult convex{"agent_utility_convex"};
    for (std::size_t i = 1; i + 1 < n; ++i) {
      convex.record(u[i + 1] - 2.0 * u[i] + u[i - 1], kPropertyTol, types[i]);
    }
    report.checks.push_back(convex);
  }

  for (const auto& c : report.checks) report.passed = report.passed && c.passed;
  return report;
}

ImplicationReport verify_ir_implications(const SynthesisResult& result, const Scenario& scenario) {
  const Menu& menu = result.menu;
  require_same_grids(menu, scenario);
  const std::size_t n = menu.types.size();
  const LossGrid& losses = menu.losses;
  const auto& mass = scenario.mu_mass();
  ImplicationReport report;

  bool all_full = true;
  bool all_zero = true;
  bool zero_premium = true;
  for (std::size_t i = 0; i < n; ++i) {
    const RowKind k = classify_row(menu.retention.row(i));
    all_full = all_full && k == RowKind::Full;
    all_zero = all_zero && k == RowKind::Zero;
    zero_premium = zero_premium && menu.premium.premia[i] == 0.0;
  }

  // int int g_In(F) dl dmu and int g_lo(F_lo) dl
  double insurer_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < losses.cells(); ++j) acc += (1.0 - scenario.psi()(i, j)) * losses.width(j);
    insurer_mass += mass[i] * acc;
  }
  double lowest_mass = 0.0;
  for (std::size_t j = 0; j < losses.cells(); ++j) lowest_mass += (1.0 - scenario.phi()(0, j)) * losses.width(j);

  const bool pooled_regime = result.regime == Regime::FullCoverageZeroPremium ||
                             result.regime == Regime::AgentOnly;

  if (all_full && zero_premium) {
    CheckResult flag{"insurer_weight_full_almost_everywhere"};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < losses.cells(); ++j) {
        flag.record(-scenario.psi()(i, j), 1e-12, menu.types[i], losses.midpoint(j));
      }
    }
    report.p2_impossible = !flag.passed;
    report.checks.push_back(flag);
  }

  if (!pooled_regime) {
    if (all_zero) {
      CheckResult zero{"zero_coverage_insurer_indifferent"};
      const std::vector<double> v = insurer_utilities(menu, scenario);
      for (std::size_t i = 0; i < n; ++i) zero.record(-std::abs(v[i]), kZeroUtilityTol, menu.types[i]);
      report.checks.push_back(zero);
    } else {
      // P2 with the lowest type's participation binding, rewritten in primitives:
      // int int g_In(F) >= int g_lo(F_lo) + int U dmu - U_lo + int int (g_In - g) r dmu.
      const std::vector<double> u = agent_utilities(menu, scenario);
      double agg_u = 0.0;
      double wedge = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        agg_u += mass[i] * u[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < losses.cells(); ++j) {
          acc += (scenario.phi()(i, j) - scenario.psi()(i, j)) * menu.retention.slope(i, j) *
                 losses.width(j);
        }
        wedge += mass[i] * acc;
      }
      const double rhs = lowest_mass + agg_u - u[0] + wedge;
      CheckResult ineq{all_full ? "full_coverage_insurer_mass" : "partial_coverage_insurer_mass"};
      ineq.record(insurer_mass - rhs, 1e-6);
      report.checks.push_back(ineq);
    }
  }

  for (const auto& c : report.checks) {
    if (c.name == "insurer_weight_full_almost_everywhere") continue;
    report.passed = report.passed && c.passed;
  }
  return report;
}

DominanceReport pareto_dominance_search(const Menu& menu, const Scenario& scenario, double alpha,
                                        std::size_t trials, std::uint64_t seed,
                                        const std::vector<Menu>& candidates,
                                        const DominanceOptions& options) {
  require_same_grids(menu, scenario);
  const std::size_t n = menu.types.size();
  const std::size_t m = menu.losses.cells();

  DominanceReport report;
  report.seed = seed;
  report.trials = trials;
  report.input_ic = verify_ic(menu, scenario, options.tol).passed();
  report.input_ir = verify_ir(menu, scenario, options.tol).passed();

  const std::vector<double> base_u = agent_utilities(menu, scenario);
  const double base_v = aggregate_insurer_utility(menu, scenario);
  const bool anchor_cap = alpha <= 0.5;

  struct Outcome {
    bool feasible = false;
    bool dominates = false;
    Dominator record{};
  };

  auto evaluate = [&](const Menu& trial_menu, std::size_t index) {
    Outcome out;
    if (!verify_ic(trial_menu, scenario, options.tol).passed()) return out;
    if (!verify_ir(trial_menu, scenario, options.tol).passed()) return out;
    out.feasible = true;
    const std::vector<double> u = agent_utilities(trial_menu, scenario);
    const double v = aggregate_insurer_utility(trial_menu, scenario);
    double min_gain = u[0] - base_u[0];
    double max_gain = min_gain;
    for (std::size_t i = 1; i < n; ++i) {
      min_gain = std::min(min_gain, u[i] - base_u[i]);
      max_gain = std::max(max_gain, u[i] - base_u[i]);
    }
    const double v_gain = v - base_v;
    if (min_gain < -options.weak_tol || v_gain < -options.weak_tol) return out;
    if (v_gain > options.strict_tol) {
      out.dominates = true;
      out.record = {index, "strict_insurer", min_gain, max_gain, v_gain};
    } else if (max_gain > options.strict_tol) {
      out.dominates = true;
      out.record = {index, "strict_agent", min_gain, max_gain, v_gain};
    }
    return out;
  };

  auto perturb = [&](std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(trial)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> type_pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> cell_pick(0, m - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RowMatrix slopes = menu.retention.slopes();
    std::size_t c0 = cell_pick(rng);
    std::size_t c1 = cell_pick(rng);
    if (c0 > c1) std::swap(c0, c1);
    const std::size_t pivot = type_pick(rng);
    const int kind = static_cast<int>(unit(rng) * 3.0);
    const double strength = unit(rng) < 0.5 ? 1.0 : unit(rng);
    for (std::size_t j = c0; j <= c1; ++j) {
      if (kind == 0) {
        // toward full coverage on an upper set of types
        for (std::size_t i = pivot; i < n; ++i) slopes(i, j) *= (1.0 - strength);
      } else if (kind == 1) {
        // toward zero coverage on a lower set of types
        for (std::size_t i = 0; i <= pivot; ++i) slopes(i, j) += strength * (1.0 - slopes(i, j));
      } else {
        // single row, any direction
        const double target = unit(rng) < 0.5 ? 0.0 : 1.0;
        slopes(pivot, j) += strength * (target - slopes(pivot, j));
      }
    }
    // repair each column to be non-increasing in theta, clipping from below or above
    const bool clip_down = unit(rng) < 0.5;
    for (std::size_t j = 0; j < m; ++j) {
      if (clip_down) {
        for (std::size_t i = 1; i < n; ++i) slopes(i, j) = std::min(slopes(i, j), slopes(i - 1, j));
      } else {
        for (std::size_t i = n - 1; i-- > 0;) slopes(i, j) = std::max(slopes(i, j), slopes(i + 1, j));
      }
    }
    RetentionSchedule retention(std::move(slopes));
    double base = 0.0;
    if (anchor_cap) base = max_ir_premium(scenario.types()[0], retention.row(0), scenario);
    // premium rebalancing: shift the anchor by a small amount either way
    const double shift = (unit(rng) - 0.5) * 0.02 * unit(rng);
    base += shift;
    PremiumSchedule premia = premium_from_ic(retention, base, scenario);
    return Menu(menu.types, menu.losses, std::move(retention), std::move(premia));
  };

  const std::size_t total = candidates.size() + trials;
  std::vector<Outcome> outcomes(total);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    require_same_grids(candidates[c], scenario);
    outcomes[c] = evaluate(candidates[c], c);
  }

  const unsigned workers = std::min<std::size_t>(resolve_workers(options.workers), std::max<std::size_t>(trials, 1));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < trials; t += workers) {
        outcomes[candidates.size() + t] = evaluate(perturb(t), candidates.size() + t);
      }
    });
  }
  for (auto& th : pool) th.join();

  for (const Outcome& o : outcomes) {
    if (o.feasible) ++report.feasible;
    if (o.dominates) report.dominators.push_back(o.record);
  }
  return report;
}

}  // namespace dumenu
