#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dumenu {

/// Outcome of one pointwise check over a probe grid. `worst` is the most
/// negative margin seen (margin >= -tol means the point passes).
struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  double worst = 0.0;
  std::optional<double> worst_theta;
  std::optional<double> worst_loss;
  std::size_t violations = 0;
  std::size_t evaluated = 0;

  // Records one evaluation; margin below -tol counts as a violation.
  void record(double margin, double tol, std::optional<double> theta = std::nullopt,
              std::optional<double> loss = std::nullopt);
};

/// Collection of checks. `passed` is decided by the producing operation,
/// since some checks are informational only.
struct AssumptionReport {
  bool passed = true;
  std::vector<CheckResult> checks;
  std::vector<double> violating_thetas;

  const CheckResult* find(const std::string& name) const;
};

/// Participation status of a menu. P1 is per type (premium against the
/// type's willingness to pay), P2 is the insurer's aggregate utility.
struct IRReport {
  std::vector<double> p1_margin;
  std::vector<bool> p1_ok;
  double p1_worst = 0.0;
  bool p1_passed = true;
  double p2_value = 0.0;
  bool p2_ok = true;
  /// Verdict from the lowest type alone; sufficient for IC menus with P2.
  bool lowest_type_p1 = true;

  bool passed() const { return p1_passed && p2_ok; }
};

/// One failed pointwise check. magnitude is the (positive) size of the breach.
struct ViolationRecord {
  std::string kind;
  double theta = 0.0;
  std::optional<double> theta_other;
  std::optional<double> loss;
  double magnitude = 0.0;
};

}  // namespace dumenu
