#include "dumenu/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dumenu/error.hpp"

namespace dumenu {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kSlopeTol = 1e-12;
constexpr double kAssumptionTol = 1e-10;

// t^e and its derivatives in e and t, with the t -> 0 limits taken explicitly.
double pow0(double t, double e) { return t <= 0.0 ? 0.0 : std::pow(t, e); }
double log_pow(double t, double e) { return t <= 0.0 ? 0.0 : std::log(t) * std::pow(t, e); }
double log2_pow(double t, double e) {
  if (t <= 0.0) return 0.0;
  const double lt = std::log(t);
  return lt * lt * std::pow(t, e);
}

template <class F>
double central_theta(const F& f, double theta, double x) {
  return (f(theta + kFdStep, x) - f(theta - kFdStep, x)) / (2.0 * kFdStep);
}

template <class F>
double central2_theta(const F& f, double theta, double x) {
  return (f(theta + kFdStep, x) - 2.0 * f(theta, x) + f(theta - kFdStep, x)) /
         (kFdStep * kFdStep);
}

// One-sided near the ends of [0,1] so the distortion is never evaluated outside it.
double central_t(const std::function<double(double)>& f, double t) {
  const double a = std::max(0.0, t - kFdStep);
  const double b = std::min(1.0, t + kFdStep);
  return (f(b) - f(a)) / (b - a);
}

double second_t(const std::function<double(double)>& f, double t) {
  const double c = std::clamp(t, kFdStep, 1.0 - kFdStep);
  return (f(c + kFdStep) - 2.0 * f(c) + f(c - kFdStep)) / (kFdStep * kFdStep);
}

}  // namespace

DistortionFamily DistortionFamily::power(double a, double b) {
  DistortionFamily d;
  d.name = "power";
  auto e = [a, b](double theta) { return a + b * theta; };
  d.eval = [e](double theta, double t) { return pow0(t, e(theta)); };
  d.d_theta = [e, b](double theta, double t) { return b * log_pow(t, e(theta)); };
  d.d_t = [e](double theta, double t) {
    const double k = e(theta);
    return k * pow0(t, k - 1.0);
  };
  d.d2_theta = [e, b](double theta, double t) { return b * b * log2_pow(t, e(theta)); };
  d.d2_t = [e](double theta, double t) {
    const double k = e(theta);
    return k * (k - 1.0) * pow0(t, k - 2.0);
  };
  d.d2_mixed = [e, b](double theta, double t) {
    const double k = e(theta);
    if (t <= 0.0) return 0.0;
    return b * std::pow(t, k - 1.0) * (1.0 + k * std::log(t));
  };
  // Exponent bounds are type dependent; the probe check measures the actual constant.
  d.lipschitz_t = std::max(1.0, a + std::abs(b));
  d.lipschitz_theta = std::abs(b) / std::exp(1.0);
  return d;
}

DistortionFamily DistortionFamily::identity() {
  DistortionFamily d = power(1.0, 0.0);
  d.name = "identity";
  return d;
}

double DistortionFamily::partial_theta(double theta, double t) const {
  return d_theta ? d_theta(theta, t) : central_theta(eval, theta, t);
}

double DistortionFamily::partial_t(double theta, double t) const {
  if (d_t) return d_t(theta, t);
  return central_t([&](double x) { return eval(theta, x); }, t);
}

double DistortionFamily::partial2_theta(double theta, double t) const {
  return d2_theta ? d2_theta(theta, t) : central2_theta(eval, theta, t);
}

double DistortionFamily::partial2_t(double theta, double t) const {
  if (d2_t) return d2_t(theta, t);
  return second_t([&](double x) { return eval(theta, x); }, t);
}

double DistortionFamily::partial2_mixed(double theta, double t) const {
  if (d2_mixed) return d2_mixed(theta, t);
  return central_theta([&](double th, double x) { return partial_t(th, x); }, theta, t);
}

InsurerDistortion InsurerDistortion::power(double beta) {
  if (!(beta > 0.0)) throw ConfigError("insurer distortion exponent must be > 0");
  InsurerDistortion d;
  d.name = "power";
  d.eval = [beta](double t) { return pow0(t, beta); };
  d.d_t = [beta](double t) { return beta * pow0(t, beta - 1.0); };
  return d;
}

InsurerDistortion InsurerDistortion::identity() {
  InsurerDistortion d;
  d.name = "identity";
  d.eval = [](double t) { return t; };
  d.d_t = [](double) { return 1.0; };
  return d;
}

double InsurerDistortion::derivative(double t) const {
  return d_t ? d_t(t) : central_t(eval, t);
}

LossFamily LossFamily::power(double cap, double kappa) {
  if (!(cap > 0.0)) throw ConfigError("loss cap must be > 0");
  LossFamily f;
  f.name = "power";
  f.loss_cap = cap;
  auto e = [kappa](double theta) { return 1.0 + kappa * theta; };
  f.cdf = [cap, e](double theta, double l) {
    return l >= cap ? 1.0 : pow0(l / cap, e(theta));
  };
  f.d_theta = [cap, e, kappa](double theta, double l) {
    return l >= cap ? 0.0 : kappa * log_pow(l / cap, e(theta));
  };
  f.d2_theta = [cap, e, kappa](double theta, double l) {
    return l >= cap ? 0.0 : kappa * kappa * log2_pow(l / cap, e(theta));
  };
  f.lipschitz_theta = std::abs(kappa) / std::exp(1.0);
  return f;
}

LossFamily LossFamily::uniform(double cap) {
  LossFamily f = power(cap, 0.0);
  f.name = "uniform";
  return f;
}

LossFamily LossFamily::zero(double cap) {
  if (!(cap > 0.0)) throw ConfigError("loss cap must be > 0");
  LossFamily f;
  f.name = "zero";
  f.loss_cap = cap;
  f.cdf = [](double, double) { return 1.0; };
  f.d_theta = [](double, double) { return 0.0; };
  f.d2_theta = [](double, double) { return 0.0; };
  f.lipschitz_theta = 0.0;
  return f;
}

double LossFamily::partial_theta(double theta, double l) const {
  return d_theta ? d_theta(theta, l) : central_theta(cdf, theta, l);
}

double LossFamily::partial2_theta(double theta, double l) const {
  return d2_theta ? d2_theta(theta, l) : central2_theta(cdf, theta, l);
}

LossGrid::LossGrid(double loss_cap, std::size_t cells) {
  if (!(loss_cap > 0.0)) throw ConfigError("loss grid: loss_cap must be > 0");
  if (cells < 1) throw ConfigError("loss grid: need at least one cell");
  nodes_.resize(cells + 1);
  const double h = loss_cap / static_cast<double>(cells);
  for (std::size_t j = 0; j <= cells; ++j) nodes_[j] = h * static_cast<double>(j);
  nodes_.back() = loss_cap;
  widths_.resize(cells);
  mids_.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    widths_[j] = nodes_[j + 1] - nodes_[j];
    mids_[j] = 0.5 * (nodes_[j] + nodes_[j + 1]);
  }
}

const char* to_string(OrderingMode mode) {
  switch (mode) {
    case OrderingMode::MoreAverseLargerLoss:
      return "more_averse_larger_loss";
    case OrderingMode::LessAverseLargerLoss:
      return "less_averse_larger_loss";
  }
  return "unknown";
}

void validate_slopes(SlopeRow r) {
  for (double s : r) {
    if (!(s >= -kSlopeTol && s <= 1.0 + kSlopeTol)) {
      throw InvalidSlope("marginal retention " + std::to_string(s) + " outside [0, 1]");
    }
  }
}

double no_insurance_utility(double theta, const Preferences& prefs, const LossGrid& grid) {
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double f = prefs.loss.value(theta, grid.midpoint(j));
    acc += (1.0 - prefs.agent.value(theta, f)) * grid.width(j);
  }
  return -acc;
}

double agent_utility(double theta, SlopeRow r, double premium, const Preferences& prefs,
                     const LossGrid& grid) {
  if (r.size() != grid.cells()) throw GridMismatch("slope row length differs from loss grid");
  validate_slopes(r);
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double f = prefs.loss.value(theta, grid.midpoint(j));
    acc += (1.0 - prefs.agent.value(theta, f)) * r[j] * grid.width(j);
  }
  return -premium - acc;
}

double insurer_utility(double theta, SlopeRow r, double premium, const Preferences& prefs,
                       const LossGrid& grid) {
  if (r.size() != grid.cells()) throw GridMismatch("slope row length differs from loss grid");
  validate_slopes(r);
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double f = prefs.loss.value(theta, grid.midpoint(j));
    acc += (1.0 - prefs.insurer.value(f)) * (1.0 - r[j]) * grid.width(j);
  }
  return premium - acc;
}

AssumptionReport check_preference_assumptions(const Preferences& prefs, OrderingMode mode,
                                              std::span<const double> type_probe,
                                              std::span<const double> loss_probe,
                                              std::size_t t_probe_count) {
  if (t_probe_count < 2) t_probe_count = 2;
  std::vector<double> ts(t_probe_count);
  for (std::size_t k = 0; k < t_probe_count; ++k) {
    ts[k] = static_cast<double>(k) / static_cast<double>(t_probe_count - 1);
  }

  CheckResult normalized{"distortion_normalized"};
  CheckResult monotone{"distortion_monotone"};
  CheckResult lipschitz{"distortion_lipschitz_t"};
  CheckResult insurer_norm{"insurer_normalized"};
  CheckResult insurer_mono{"insurer_monotone"};
  CheckResult dominance{"insurer_dominance"};
  CheckResult aversion{mode == OrderingMode::MoreAverseLargerLoss
                                   ? "aversion_increasing_in_type"
                                   : "aversion_decreasing_in_type"};
  CheckResult cdf_cap{"loss_cdf_at_cap"};
  CheckResult cdf_mono{"loss_cdf_monotone"};
  CheckResult fosd{"loss_fosd_increasing_in_type"};
  CheckResult loss_dominates{"loss_dominates_aversion"};
  CheckResult composite{"composite_decreasing_in_type"};

  insurer_norm.record(-std::abs(prefs.insurer.value(0.0)), kAssumptionTol);
  insurer_norm.record(-std::abs(prefs.insurer.value(1.0) - 1.0), kAssumptionTol);
  for (std::size_t k = 1; k < ts.size(); ++k) {
    insurer_mono.record(prefs.insurer.value(ts[k]) - prefs.insurer.value(ts[k - 1]),
                        kAssumptionTol, std::nullopt, ts[k]);
  }

  for (double theta : type_probe) {
    normalized.record(-std::abs(prefs.agent.value(theta, 0.0)), kAssumptionTol, theta);
    normalized.record(-std::abs(prefs.agent.value(theta, 1.0) - 1.0), kAssumptionTol, theta);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double t = ts[k];
      const double g = prefs.agent.value(theta, t);
      dominance.record(prefs.insurer.value(t) - g, kAssumptionTol, theta, t);
      const double dg = prefs.agent.partial_theta(theta, t);
      aversion.record(mode == OrderingMode::MoreAverseLargerLoss ? -dg : dg, kAssumptionTol,
                      theta, t);
      if (k > 0) {
        const double prev = prefs.agent.value(theta, ts[k - 1]);
        monotone.record(g - prev, kAssumptionTol, theta, t);
        const double dt = t - ts[k - 1];
        lipschitz.record(prefs.agent.lipschitz_t * dt - std::abs(g - prev), kAssumptionTol,
                         theta, t);
      }
    }

    cdf_cap.record(-std::abs(prefs.loss.value(theta, prefs.loss.loss_cap) - 1.0),
                   kAssumptionTol, theta, prefs.loss.loss_cap);
    double prev_f = prefs.loss.value(theta, 0.0);
    cdf_mono.record(prev_f, kAssumptionTol, theta, 0.0);
    for (double l : loss_probe) {
      const double f = prefs.loss.value(theta, l);
      cdf_mono.record(f - prev_f, kAssumptionTol, theta, l);
      prev_f = f;
      const double df = prefs.loss.partial_theta(theta, l);
      fosd.record(-df, kAssumptionTol, theta, l);
      const double dg_at_f = prefs.agent.partial_theta(theta, f);
      const double gp_at_f = prefs.agent.partial_t(theta, f);
      const double chain = dg_at_f + gp_at_f * df;
      composite.record(-chain, kAssumptionTol, theta, l);
      if (mode == OrderingMode::LessAverseLargerLoss) {
        loss_dominates.record(gp_at_f * std::abs(df) - std::abs(dg_at_f), kAssumptionTol, theta,
                              l);
      }
    }
  }

  AssumptionReport report;
  report.passed = normalized.passed && monotone.passed && insurer_norm.passed &&
                  insurer_mono.passed && dominance.passed && aversion.passed &&
                  cdf_cap.passed && cdf_mono.passed && fosd.passed && composite.passed;
  if (mode == OrderingMode::LessAverseLargerLoss) report.passed = report.passed && loss_dominates.passed;

  for (const CheckResult* c : {&dominance, &aversion, &fosd, &composite, &loss_dominates}) {
    if (c->passed || !c->worst_theta) continue;
    if (std::find(report.violating_thetas.begin(), report.violating_thetas.end(),
                  *c->worst_theta) == report.violating_thetas.end()) {
      report.violating_thetas.push_back(*c->worst_theta);
    }
  }

  report.checks = {normalized, monotone, lipschitz, insurer_norm, insurer_mono, dominance,
                   aversion, cdf_cap, cdf_mono, fosd, composite};
  if (mode == OrderingMode::LessAverseLargerLoss) report.checks.push_back(loss_dominates);
  return report;
}

}  // namespace dumenu
