#pragma once

// Closed forms for the power families used by the built-in scenarios,
// computed here without going through the library's tabulated weights:
//   g_theta(t) = t^(a + b theta),  F_theta(l) = l^(1 + kappa theta),  losses on [0, 1]
// so g_theta(F_theta(l)) = l^e(theta) with e = (1 + kappa theta)(a + b theta).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ref {

struct PowerFamily {
  double a = 1.0;
  double b = 1.0;
  double kappa = 1.0;

  double exponent(double theta) const { return (1.0 + kappa * theta) * (a + b * theta); }
  double exponent_dtheta(double theta) const {
    return kappa * (a + b * theta) + b * (1.0 + kappa * theta);
  }
  double phi(double theta, double l) const { return 1.0 - std::pow(l, exponent(theta)); }
  // d/dtheta g_theta(F_theta(l))
  double rent(double theta, double l) const {
    if (l <= 0.0) return 0.0;
    return exponent_dtheta(theta) * std::log(l) * std::pow(l, exponent(theta));
  }
  // continuum no-insurance utility -int_0^1 (1 - l^e) dl
  double no_insurance(double theta) const { return -(1.0 - 1.0 / (exponent(theta) + 1.0)); }
};

inline PowerFamily s1() { return {1.0, 1.0, 1.0}; }
inline PowerFamily s3() { return {2.0, -0.2, 2.0}; }

// Midpoint rule on `cells` equal cells of [0, 1].
template <class F>
double midpoint(std::size_t cells, F&& f) {
  const double h = 1.0 / static_cast<double>(cells);
  double s = 0.0;
  for (std::size_t j = 0; j < cells; ++j) s += f(j, (static_cast<double>(j) + 0.5) * h) * h;
  return s;
}

// U_theta of a contract given per-cell slopes and premium.
inline double utility(const PowerFamily& fam, double theta, std::span<const double> slopes,
                      double premium) {
  return -premium - midpoint(slopes.size(), [&](std::size_t j, double l) {
           return fam.phi(theta, l) * slopes[j];
         });
}

inline double no_insurance_grid(const PowerFamily& fam, double theta, std::size_t cells) {
  return -midpoint(cells, [&](std::size_t, double l) { return fam.phi(theta, l); });
}

}  // namespace ref
