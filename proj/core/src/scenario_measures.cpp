#include "dumenu/scenario_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "dumenu/error.hpp"

namespace dumenu {

namespace {

constexpr double kSurvivalFloor = 1e-14;
constexpr double kAssumptionTol = 1e-10;

}  // namespace

TypeGrid::TypeGrid(double theta_lo, double theta_hi, std::size_t count)
    : lo_(theta_lo), hi_(theta_hi) {
  if (!(theta_lo < theta_hi)) throw ConfigError("type grid: theta_lo must be < theta_hi");
  if (count < 3) throw ConfigError("type grid: count must be >= 3");
  nodes_.resize(count);
  const double h = (theta_hi - theta_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) nodes_[i] = theta_lo + h * static_cast<double>(i);
  nodes_.back() = theta_hi;
}

TypeGrid TypeGrid::coarse(double theta_lo, double theta_hi, std::size_t count) {
  if (count >= 3) return TypeGrid(theta_lo, theta_hi, count);
  if (!(theta_lo < theta_hi)) throw ConfigError("type grid: theta_lo must be < theta_hi");
  if (count == 0) throw ConfigError("type grid: count must be >= 1");
  TypeGrid g;
  g.lo_ = theta_lo;
  g.hi_ = theta_hi;
  g.nodes_ = count == 1 ? std::vector<double>{theta_hi} : std::vector<double>{theta_lo, theta_hi};
  return g;
}

std::vector<double> TypeGrid::trapezoid_weights() const {
  if (nodes_.size() == 1) return {1.0};
  std::vector<double> w(nodes_.size(), step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

TypeMeasure::TypeMeasure(std::string name, double lo, double hi, Fn density, Fn cdf,
                         Fn survival, Fn density_derivative)
    : name_(std::move(name)),
      lo_(lo),
      hi_(hi),
      density_(std::move(density)),
      cdf_(std::move(cdf)),
      survival_(std::move(survival)),
      density_derivative_(std::move(density_derivative)) {
  if (!(lo < hi)) throw ConfigError("type measure '" + name_ + "': lo must be < hi");
}

TypeMeasure TypeMeasure::uniform(double lo, double hi) {
  const double width = hi - lo;
  return TypeMeasure(
      "uniform", lo, hi, [width](double) { return 1.0 / width; },
      [lo, width](double t) { return (t - lo) / width; },
      [hi, width](double t) { return (hi - t) / width; }, [](double) { return 0.0; });
}

TypeMeasure TypeMeasure::power(double lo, double hi, double k) {
  if (lo < 0.0) throw ConfigError("power type measure needs lo >= 0");
  if (k < 0.0) throw ConfigError("power type measure needs k >= 0");
  const double e = k + 1.0;
  const double span = std::pow(hi, e) - std::pow(lo, e);
  const double c = e / span;
  return TypeMeasure(
      "power", lo, hi, [c, k](double t) { return c * std::pow(t, k); },
      [lo, e, span](double t) { return (std::pow(t, e) - std::pow(lo, e)) / span; },
      [hi, e, span](double t) { return (std::pow(hi, e) - std::pow(t, e)) / span; },
      [c, k](double t) { return k == 0.0 ? 0.0 : c * k * std::pow(t, k - 1.0); });
}

TypeMeasure TypeMeasure::power_reflected(double lo, double hi, double k) {
  if (k < 0.0) throw ConfigError("reflected power type measure needs k >= 0");
  const double e = k + 1.0;
  const double width = hi - lo;
  const double c = e / std::pow(width, e);
  return TypeMeasure(
      "power_reflected", lo, hi, [c, k, hi](double t) { return c * std::pow(hi - t, k); },
      [hi, e, width](double t) { return 1.0 - std::pow((hi - t) / width, e); },
      [hi, e, width](double t) { return std::pow((hi - t) / width, e); },
      [c, k, hi](double t) { return k == 0.0 ? 0.0 : -c * k * std::pow(hi - t, k - 1.0); });
}

double TypeMeasure::density_derivative(double theta) const {
  if (density_derivative_) return density_derivative_(theta);
  constexpr double step = 1e-5;
  const double a = std::max(lo_, theta - step);
  const double b = std::min(hi_, theta + step);
  return (density_(b) - density_(a)) / (b - a);
}

double hazard_rate(const TypeMeasure& dist, double theta) {
  const double s = dist.survival(theta);
  if (s <= kSurvivalFloor) {
    throw DegenerateSurvival("hazard rate undefined: survival vanishes at theta=" +
                             std::to_string(theta));
  }
  return dist.density(theta) / s;
}

double survival_ratio(const TypeMeasure& eta, const TypeMeasure& mu, double theta) {
  const double s = mu.survival(theta);
  if (theta >= mu.hi() || s <= kSurvivalFloor) {
    const double q = mu.density(mu.hi());
    if (q <= 0.0) throw DegenerateDensity("survival ratio limit needs q(theta_hi) > 0");
    return eta.density(mu.hi()) / q;
  }
  return eta.survival(theta) / s;
}

double inverse_hazard(const TypeMeasure& mu, double theta) {
  if (theta >= mu.hi()) return 0.0;
  const double q = mu.density(theta);
  if (q <= 0.0) throw DegenerateDensity("inverse hazard needs q(theta) > 0");
  return mu.survival(theta) / q;
}

AssumptionReport check_hazard_dominance(const TypeMeasure& mu, const TypeMeasure& eta,
                                        const TypeGrid& grid) {
  AssumptionReport report;
  CheckResult dominance{"hazard_dominance"};
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double theta = grid[i];
    const double se = eta.survival(theta);
    const double sm = mu.survival(theta);
    if (se <= kSurvivalFloor || sm <= kSurvivalFloor) continue;
    const double margin = mu.density(theta) / sm - eta.density(theta) / se;
    const std::size_t before = dominance.violations;
    dominance.record(margin, kAssumptionTol, theta);
    if (dominance.violations != before) report.violating_thetas.push_back(theta);
  }

  CheckResult monotone{"survival_ratio_monotone"};
  double prev = survival_ratio(eta, mu, grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = survival_ratio(eta, mu, grid[i]);
    monotone.record(cur - prev, kAssumptionTol, grid[i]);
    prev = cur;
  }

  CheckResult endpoint{"endpoint_density_ratio_ge_one"};
  endpoint.record(survival_ratio(eta, mu, grid.hi()) - 1.0, kAssumptionTol, grid.hi());

  report.passed = dominance.passed;
  report.checks = {dominance, monotone, endpoint};
  return report;
}

double boundary_alpha(const TypeMeasure& mu, const TypeMeasure& eta) {
  const double q = mu.density(mu.hi());
  if (q <= 0.0) throw DegenerateDensity("boundary alpha needs q(theta_hi) > 0");
  return q / (eta.density(mu.hi()) + q);
}

}  // namespace dumenu
