#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dumenu/matrix.hpp"
#include "dumenu/scenario.hpp"

namespace dumenu {

/// Marginal retention per (type node, loss cell). Entries lie in [0, 1].
class RetentionSchedule {
 public:
  RetentionSchedule() = default;
  explicit RetentionSchedule(RowMatrix slopes);

  static RetentionSchedule constant(std::size_t types, std::size_t cells, double slope);

  std::size_t types() const noexcept { return slopes_.rows(); }
  std::size_t cells() const noexcept { return slopes_.cols(); }
  double slope(std::size_t i, std::size_t j) const { return slopes_(i, j); }
  std::span<const double> row(std::size_t i) const { return slopes_.row(i); }
  const RowMatrix& slopes() const noexcept { return slopes_; }

  /// R(theta_i, .) at the loss grid nodes; R(theta_i, 0) = 0.
  std::vector<double> retention_row(std::size_t i, const LossGrid& grid) const;

  friend bool operator==(const RetentionSchedule&, const RetentionSchedule&) = default;

 private:
  RowMatrix slopes_;
};

struct PremiumSchedule {
  std::vector<double> premia;

  friend bool operator==(const PremiumSchedule&, const PremiumSchedule&) = default;
};

struct Menu {
  TypeGrid types;
  LossGrid losses;
  RetentionSchedule retention;
  PremiumSchedule premium;

  Menu(TypeGrid types, LossGrid losses, RetentionSchedule retention, PremiumSchedule premium);

  /// Premium between nodes by linear interpolation. Reporting only.
  double premium_at(double theta) const;
};

/// Throws GridMismatch unless the menu lives on the scenario's grids.
void require_same_grids(const Menu& menu, const Scenario& scenario);

/// Premia making the retention schedule incentive compatible, anchored at
/// p(theta_lo) = p_base. Equivalent to p_base + <phi_0, r_0> - <phi_k, r_k> plus
/// the information rent, where each type interval contributes the exact change
/// of phi = 1 - g(F) across it weighted by the mean slope of its two end rows.
/// Accumulated as increments 1/2 <phi_{k-1} + phi_k, r_{k-1} - r_k>.
PremiumSchedule premium_from_ic(const RetentionSchedule& retention, double p_base,
                                const Scenario& scenario);

/// int (1 - g_theta(F_theta)) (1 - r) dl: the largest premium type theta accepts.
double max_ir_premium(double theta, SlopeRow r, const Scenario& scenario);

/// Agent utility of type node i when taking the contract of node k.
double agent_utility_at(const Menu& menu, const Scenario& scenario, std::size_t i, std::size_t k);

/// Per-node utilities of each type under its own contract.
std::vector<double> agent_utilities(const Menu& menu, const Scenario& scenario);
std::vector<double> insurer_utilities(const Menu& menu, const Scenario& scenario);

/// int V_theta dmu over the type grid. Throws GridMismatch.
double aggregate_insurer_utility(const Menu& menu, const Scenario& scenario);

struct SubmodularityViolation {
  std::size_t type_index;
  std::size_t cell;
  double theta;
  double loss;
  double gap;
};

struct SubmodularityReport {
  bool passed = true;
  double worst_gap = 0.0;
  std::vector<SubmodularityViolation> violations;
};

/// Slopes must be non-increasing in theta cell by cell (tolerance 1e-12).
/// Violations are located at the lower type of the pair and the cell midpoint.
SubmodularityReport check_submodular(const RetentionSchedule& retention, const TypeGrid& types,
                                     const LossGrid& losses);

// Serialization. CSV columns: theta,l,slope,retention,premium with one row per
// (type node, loss cell); l is the cell's right edge and retention is R there.
void write_menu_csv(const Menu& menu, std::ostream& out);
Menu read_menu_csv(std::istream& in);
nlohmann::json menu_to_json(const Menu& menu);
Menu menu_from_json(const nlohmann::json& j);

}  // namespace dumenu
