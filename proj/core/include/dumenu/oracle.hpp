#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dumenu/matrix.hpp"
#include "dumenu/menus.hpp"
#include "dumenu/scenario.hpp"

namespace dumenu {

/// alpha * int U dEta + (1 - alpha) * int V dMu over the type grid.
double social_welfare(const Menu& menu, double alpha, const Scenario& scenario);

/// Welfare in integrated-by-parts form:
///   (1 - 2a)[p_lo + int phi_lo r_lo] - int int J r dl dmu - (1 - a) int int (1 - g_In(F)) dl dmu,
/// with the continuum virtual value J. Agrees with social_welfare up to
/// discretization error for menus whose premia come from premium_from_ic.
double social_welfare_by_parts(const Menu& menu, double alpha, const Scenario& scenario);

/// Largest enumeration the oracle accepts.
inline constexpr double kOracleCap = 2e6;

/// A desk-sized instance: the scenario restricted to a few type nodes and loss cells.
struct SmallInstance {
  Scenario scenario;
  std::vector<double> alphabet{0.0, 0.5, 1.0};

  /// Regrids `base` onto `type_count` nodes (1..4) and `cell_count` cells (1..5).
  static SmallInstance from(const Scenario& base, std::size_t type_count, std::size_t cell_count,
                            std::vector<double> alphabet = {0.0, 0.5, 1.0});

  /// |alphabet|^(types * cells).
  double assignments() const;
};

struct OracleResult {
  double max_welfare = 0.0;
  RowMatrix argmax_slopes;
  std::vector<double> argmax_premia;
  std::uint64_t argmax_index = 0;
  std::uint64_t enumerated = 0;
  std::uint64_t feasible_count = 0;
  double wall_time_s = 0.0;
};

/// Exhaustive search over slope assignments from the alphabet. Premia come
/// from premium_from_ic anchored at the lowest type's participation cap
/// (alpha <= 1/2) or at zero (alpha > 1/2); menus failing IC or IR at `tol`
/// are discarded. Ties go to the smallest assignment index, so the result
/// does not depend on `workers` (0 = hardware concurrency).
/// Throws InstanceTooLarge beyond kOracleCap assignments.
OracleResult enumerate_optimum(const SmallInstance& inst, double alpha, unsigned workers = 0,
                               double tol = 1e-6);

}  // namespace dumenu
