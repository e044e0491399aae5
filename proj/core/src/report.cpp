#include "dumenu/report.hpp"

#include <algorithm>

namespace dumenu {

void CheckResult::record(double margin, double tol, std::optional<double> theta,
                         std::optional<double> loss) {
  ++evaluated;
  if (margin < worst) {
    worst = margin;
    worst_theta = theta;
    worst_loss = loss;
  }
  if (margin < -tol) {
    ++violations;
    passed = false;
  }
}

const CheckResult* AssumptionReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const CheckResult& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

}  // namespace dumenu
