#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dumenu/report.hpp"

namespace dumenu {

/// Type-indexed family of distortion functions g_theta(t). Missing partial
/// derivative closures fall back to central differences with step 1e-5,
/// which costs roughly five significant digits in the virtual value.
struct DistortionFamily {
  using Fn = std::function<double(double, double)>;

  std::string name;
  Fn eval;
  Fn d_theta;
  Fn d_t;
  Fn d2_theta;
  Fn d2_t;
  Fn d2_mixed;
  double lipschitz_t = 1.0;
  double lipschitz_theta = 1.0;

  /// g_theta(t) = t^(a + b*theta); exponent must stay positive on the type range.
  static DistortionFamily power(double a, double b);
  static DistortionFamily identity();

  double value(double theta, double t) const { return eval(theta, t); }
  double partial_theta(double theta, double t) const;
  double partial_t(double theta, double t) const;
  double partial2_theta(double theta, double t) const;
  double partial2_t(double theta, double t) const;
  double partial2_mixed(double theta, double t) const;
};

/// The insurer's distortion g_In(t).
struct InsurerDistortion {
  using Fn = std::function<double(double)>;

  std::string name;
  Fn eval;
  Fn d_t;

  /// g_In(t) = t^beta.
  static InsurerDistortion power(double beta);
  static InsurerDistortion identity();

  double value(double t) const { return eval(t); }
  double derivative(double t) const;
};

/// Type-indexed loss distributions F_theta(l) supported on [0, loss_cap].
struct LossFamily {
  using Fn = std::function<double(double, double)>;

  std::string name;
  Fn cdf;
  Fn d_theta;
  Fn d2_theta;
  double loss_cap = 1.0;
  double lipschitz_theta = 1.0;

  /// F_theta(l) = (l / cap)^(1 + kappa*theta).
  static LossFamily power(double cap, double kappa);
  /// Type-independent uniform loss on [0, cap].
  static LossFamily uniform(double cap);
  /// Degenerate zero loss: F == 1.
  static LossFamily zero(double cap);

  double value(double theta, double l) const { return cdf(theta, l); }
  double partial_theta(double theta, double l) const;
  double partial2_theta(double theta, double l) const;
};

/// Uniform partition of [0, loss_cap] into cells; quadrature uses cell midpoints.
class LossGrid {
 public:
  LossGrid(double loss_cap, std::size_t cells);

  std::size_t cells() const noexcept { return widths_.size(); }
  double cap() const noexcept { return nodes_.back(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& widths() const noexcept { return widths_; }
  const std::vector<double>& midpoints() const noexcept { return mids_; }
  double midpoint(std::size_t j) const { return mids_[j]; }
  double width(std::size_t j) const { return widths_[j]; }

 private:
  std::vector<double> nodes_;
  std::vector<double> widths_;
  std::vector<double> mids_;
};

struct Preferences {
  DistortionFamily agent;
  InsurerDistortion insurer;
  LossFamily loss;
};

/// Which type ordering the synthesis assumes.
enum class OrderingMode {
  MoreAverseLargerLoss,  // higher types are more risk averse and face larger losses
  LessAverseLargerLoss,  // higher types are less risk averse but face larger losses
};

const char* to_string(OrderingMode mode);

/// Marginal retention evaluated per loss cell.
using SlopeRow = std::span<const double>;

/// -int (1 - g_theta(F_theta(l))) dl.
double no_insurance_utility(double theta, const Preferences& prefs, const LossGrid& grid);

/// -p - int (1 - g_theta(F_theta)) r dl. Throws InvalidSlope.
double agent_utility(double theta, SlopeRow r, double premium, const Preferences& prefs,
                     const LossGrid& grid);

/// p - int (1 - g_In(F_theta)) (1 - r) dl. Throws InvalidSlope.
double insurer_utility(double theta, SlopeRow r, double premium, const Preferences& prefs,
                       const LossGrid& grid);

/// Throws InvalidSlope if any entry leaves [0, 1] by more than 1e-12.
void validate_slopes(SlopeRow r);

/// Pointwise ordering and dominance checks on the (theta, t) and (theta, l)
/// probe grids. `passed` requires every mode-relevant check.
AssumptionReport check_preference_assumptions(const Preferences& prefs, OrderingMode mode,
                                              std::span<const double> type_probe,
                                              std::span<const double> loss_probe,
                                              std::size_t t_probe_count = 101);

}  // namespace dumenu
