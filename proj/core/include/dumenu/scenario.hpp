#pragma once

#include <string>
#include <vector>

#include "dumenu/matrix.hpp"
#include "dumenu/preferences.hpp"
#include "dumenu/scenario_measures.hpp"

namespace dumenu {

/// A complete problem instance. The per-cell integrands used everywhere
/// downstream are tabulated once at construction:
///   phi(i, j)  = 1 - g_theta_i(F_theta_i(l_j))     agent weight on retained loss
///   psi(i, j)  = 1 - g_In(F_theta_i(l_j))          insurer weight on ceded loss
///   rent(i, j) = d/dtheta g_theta(F_theta(l_j))     information-rent rate
/// with l_j the midpoint of loss cell j.
class Scenario {
 public:
  Scenario(std::string name, TypeGrid types, LossGrid losses, TypeMeasure mu, TypeMeasure eta,
           Preferences prefs, OrderingMode mode = OrderingMode::MoreAverseLargerLoss);

  const std::string& name() const noexcept { return name_; }
  const TypeGrid& types() const noexcept { return types_; }
  const LossGrid& losses() const noexcept { return losses_; }
  const TypeMeasure& mu() const noexcept { return mu_; }
  const TypeMeasure& eta() const noexcept { return eta_; }
  const Preferences& prefs() const noexcept { return prefs_; }
  OrderingMode mode() const noexcept { return mode_; }

  const RowMatrix& phi() const noexcept { return phi_; }
  const RowMatrix& psi() const noexcept { return psi_; }
  const RowMatrix& rent() const noexcept { return rent_; }

  /// Quadrature masses of mu and eta at the type nodes (trapezoid weight
  /// times density, normalized to sum to one).
  const std::vector<double>& mu_mass() const noexcept { return mu_mass_; }
  const std::vector<double>& eta_mass() const noexcept { return eta_mass_; }

  /// Same instance on different grids.
  Scenario regrid(const TypeGrid& types, const LossGrid& losses) const;

 private:
  std::string name_;
  TypeGrid types_;
  LossGrid losses_;
  TypeMeasure mu_;
  TypeMeasure eta_;
  Preferences prefs_;
  OrderingMode mode_;
  RowMatrix phi_;
  RowMatrix psi_;
  RowMatrix rent_;
  std::vector<double> mu_mass_;
  std::vector<double> eta_mass_;
};

/// Weighted inner product over loss cells: sum_j a[j] * b[j] * width_j.
double cell_dot(std::span<const double> a, std::span<const double> b, const LossGrid& grid);

/// sum_j a[j] * width_j.
double cell_sum(std::span<const double> a, const LossGrid& grid);

}  // namespace dumenu
