#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dumenu/menus.hpp"
#include "dumenu/report.hpp"
#include "dumenu/scenario.hpp"
#include "dumenu/synthesis.hpp"

namespace dumenu {

struct ICReport {
  std::vector<ViolationRecord> violations;
  std::size_t pairs_checked = 0;
  /// Largest gain any type gets from mimicking another (<= tol when IC holds).
  double worst_gain = 0.0;
  /// Cached pairwise integrals agreed with direct evaluation on sampled pairs.
  bool cache_consistent = true;

  bool passed() const { return violations.empty() && cache_consistent; }
};

/// Every ordered pair of type nodes (theta, theta'): a violation is recorded iff
/// U_theta(R_theta', p_theta') > U_theta(R_theta, p_theta) + tol.
ICReport verify_ic(const Menu& menu, const Scenario& scenario, double tol = 1e-6);

/// P1 per type (p <= participation cap + tol) and P2 (aggregate V >= -tol).
IRReport verify_ir(const Menu& menu, const Scenario& scenario, double tol = 1e-6);

struct PropertyReport {
  /// Keys: slopes_nonincreasing, premium_nondecreasing, top_type_full_coverage,
  /// lowest_type_indifferent, agent_utility_nonincreasing, insurer_utility_profile,
  /// agent_utility_convex (only when its hypotheses hold).
  std::vector<CheckResult> checks;
  /// Per-row coverage class: "full", "zero" or "partial".
  std::vector<std::string> row_class;
  bool passed = true;

  const CheckResult* find(const std::string& name) const;
};

PropertyReport verify_optimal_properties(const SynthesisResult& result, const Scenario& scenario);

struct ImplicationReport {
  std::vector<CheckResult> checks;
  /// Full coverage at zero premium while g_In(F) < 1 on some cell: P2 cannot hold.
  bool p2_impossible = false;
  bool passed = true;
};

ImplicationReport verify_ir_implications(const SynthesisResult& result, const Scenario& scenario);

struct Dominator {
  std::size_t trial;
  /// "strict_insurer" or "strict_agent".
  std::string clause;
  double min_agent_gain;
  double max_agent_gain;
  double insurer_gain;
};

struct DominanceReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t feasible = 0;
  bool input_ic = true;
  bool input_ir = true;
  std::vector<Dominator> dominators;

  bool dominated() const { return !dominators.empty(); }
};

struct DominanceOptions {
  double tol = 1e-6;
  /// Gains above this count as strict, losses above weak_tol break dominance.
  double strict_tol = 1e-8;
  double weak_tol = 1e-10;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned workers = 0;
};

/// Randomized search for an IC and IR menu that dominates `menu`. Trials are
/// perturbations within the premium_from_ic family; `candidates` are evaluated
/// first under trial indices 0..k-1. Deterministic for a fixed seed.
DominanceReport pareto_dominance_search(const Menu& menu, const Scenario& scenario, double alpha,
                                        std::size_t trials, std::uint64_t seed,
                                        const std::vector<Menu>& candidates = {},
                                        const DominanceOptions& options = {});

}  // namespace dumenu
