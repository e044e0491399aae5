#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dumenu/report.hpp"

namespace dumenu {

/// Uniform grid over the type interval, endpoints included.
class TypeGrid {
 public:
  TypeGrid(double theta_lo, double theta_hi, std::size_t count);

  /// Oracle-sized grid allowing 1 or 2 nodes. A single node sits at theta_hi.
  static TypeGrid coarse(double theta_lo, double theta_hi, std::size_t count);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double step() const noexcept {
    return nodes_.size() < 2 ? 0.0 : (hi_ - lo_) / static_cast<double>(nodes_.size() - 1);
  }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// Composite trapezoid weights over the nodes; {1} for a single node.
  std::vector<double> trapezoid_weights() const;

 private:
  TypeGrid() = default;

  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<double> nodes_;
};

/// Closed-form probability measure over [lo, hi] given by its density,
/// cumulative distribution and survival function. Used both for the
/// population measure and the welfare weight measure.
class TypeMeasure {
 public:
  using Fn = std::function<double(double)>;

  TypeMeasure(std::string name, double lo, double hi, Fn density, Fn cdf, Fn survival,
              Fn density_derivative = {});

  static TypeMeasure uniform(double lo, double hi);
  /// Density proportional to theta^k on [lo, hi], lo >= 0.
  static TypeMeasure power(double lo, double hi, double k);
  /// Density proportional to (hi - theta)^k on [lo, hi].
  static TypeMeasure power_reflected(double lo, double hi, double k);

  const std::string& name() const noexcept { return name_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  double density(double theta) const { return density_(theta); }
  double cdf(double theta) const { return cdf_(theta); }
  double survival(double theta) const { return survival_(theta); }
  /// q'(theta); central differences when no closed form was supplied.
  double density_derivative(double theta) const;

 private:
  std::string name_;
  double lo_;
  double hi_;
  Fn density_;
  Fn cdf_;
  Fn survival_;
  Fn density_derivative_;
};

/// q(theta) / survival(theta). Throws DegenerateSurvival when survival <= 1e-14.
double hazard_rate(const TypeMeasure& dist, double theta);

/// Survival ratio of eta to mu; at theta_hi the density-ratio limit.
double survival_ratio(const TypeMeasure& eta, const TypeMeasure& mu, double theta);

/// Inverse hazard rate survival(theta) / q(theta) of mu; zero at theta_hi.
double inverse_hazard(const TypeMeasure& mu, double theta);

/// Hazard-rate dominance of mu over eta at interior grid nodes. Also records
/// survival-ratio monotonicity and the endpoint density ratio >= 1.
AssumptionReport check_hazard_dominance(const TypeMeasure& mu, const TypeMeasure& eta,
                                        const TypeGrid& grid);

/// q(hi) / (q_eta(hi) + q(hi)): where the pooling regime starts.
double boundary_alpha(const TypeMeasure& mu, const TypeMeasure& eta);

}  // namespace dumenu
