#include "dumenu/scenario.hpp"

#include <cmath>
#include <utility>

#include "dumenu/error.hpp"

namespace dumenu {

namespace {

std::vector<double> normalized_mass(const TypeMeasure& m, const TypeGrid& grid) {
  std::vector<double> w = grid.trapezoid_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] *= m.density(grid[i]);
    total += w[i];
  }
  if (!(total > 0.0)) throw DegenerateDensity("type measure '" + m.name() + "' has no mass on grid");
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

Scenario::Scenario(std::string name, TypeGrid types, LossGrid losses, TypeMeasure mu,
                   TypeMeasure eta, Preferences prefs, OrderingMode mode)
    : name_(std::move(name)),
      types_(std::move(types)),
      losses_(std::move(losses)),
      mu_(std::move(mu)),
      eta_(std::move(eta)),
      prefs_(std::move(prefs)),
      mode_(mode) {
  if (std::abs(losses_.cap() - prefs_.loss.loss_cap) > 1e-12) {
    throw ConfigError("loss grid does not cover [0, loss_cap]");
  }
  const std::size_t n = types_.size();
  const std::size_t m = losses_.cells();
  phi_ = RowMatrix(n, m);
  psi_ = RowMatrix(n, m);
  rent_ = RowMatrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = types_[i];
    for (std::size_t j = 0; j < m; ++j) {
      const double l = losses_.midpoint(j);
      const double f = prefs_.loss.value(theta, l);
      phi_(i, j) = 1.0 - prefs_.agent.value(theta, f);
      psi_(i, j) = 1.0 - prefs_.insurer.value(f);
      rent_(i, j) = prefs_.agent.partial_theta(theta, f) +
                    prefs_.agent.partial_t(theta, f) * prefs_.loss.partial_theta(theta, l);
    }
  }
  mu_mass_ = normalized_mass(mu_, types_);
  eta_mass_ = normalized_mass(eta_, types_);
}

Scenario Scenario::regrid(const TypeGrid& types, const LossGrid& losses) const {
  return Scenario(name_, types, losses, mu_, eta_, prefs_, mode_);
}

double cell_dot(std::span<const double> a, std::span<const double> b, const LossGrid& grid) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j] * grid.width(j);
  return acc;
}

double cell_sum(std::span<const double> a, const LossGrid& grid) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * grid.width(j);
  return acc;
}

}  // namespace dumenu
