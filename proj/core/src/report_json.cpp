#include "dumenu/report_json.hpp"

namespace dumenu {

namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
nlohmann::json list(const std::vector<T>& items) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : items) arr.push_back(to_json(x));
  return arr;
}

}  // namespace

nlohmann::json to_json(const CheckResult& c) {
  return {{"name", c.name},
          {"passed", c.passed},
          {"margin", c.worst},
          {"theta", opt(c.worst_theta)},
          {"loss", opt(c.worst_loss)},
          {"violations", c.violations},
          {"evaluated", c.evaluated}};
}

nlohmann::json to_json(const AssumptionReport& r) {
  return {{"passed", r.passed}, {"checks", list(r.checks)}, {"violating_thetas", r.violating_thetas}};
}

nlohmann::json to_json(const IRReport& r) {
  nlohmann::json ok = nlohmann::json::array();
  for (bool b : r.p1_ok) ok.push_back(b);
  return {{"passed", r.passed()},
          {"p1_passed", r.p1_passed},
          {"p1_worst_margin", r.p1_worst},
          {"p1_margin", r.p1_margin},
          {"p1_ok", ok},
          {"lowest_type_p1", r.lowest_type_p1},
          {"p2_value", r.p2_value},
          {"p2_ok", r.p2_ok}};
}

nlohmann::json to_json(const ViolationRecord& v) {
  return {{"kind", v.kind},
          {"theta", v.theta},
          {"theta_other", opt(v.theta_other)},
          {"loss", opt(v.loss)},
          {"margin", v.magnitude}};
}

nlohmann::json to_json(const ICReport& r) {
  return {{"passed", r.passed()},
          {"pairs_checked", r.pairs_checked},
          {"worst_gain", r.worst_gain},
          {"cache_consistent", r.cache_consistent},
          {"violations", list(r.violations)}};
}

nlohmann::json to_json(const PropertyReport& r) {
  return {{"passed", r.passed}, {"checks", list(r.checks)}, {"row_class", r.row_class}};
}

nlohmann::json to_json(const ImplicationReport& r) {
  return {{"passed", r.passed}, {"p2_impossible", r.p2_impossible}, {"checks", list(r.checks)}};
}

nlohmann::json to_json(const ConditionsReport& r) {
  return {{"mode", to_string(r.mode)},
          {"alpha", r.alpha},
          {"sufficient_passed", r.sufficient_passed},
          {"conditions", list(r.conditions)},
          {"observed_monotone", to_json(r.observed_monotone)},
          {"grid_monotone", to_json(r.grid_monotone)}};
}

nlohmann::json to_json(const SubmodularityReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"kind", "submodularity"},
                 {"theta", x.theta},
                 {"loss", x.loss},
                 {"type_index", x.type_index},
                 {"cell", x.cell},
                 {"margin", x.gap}});
  }
  return {{"passed", r.passed}, {"worst_gap", r.worst_gap}, {"violations", v}};
}

nlohmann::json to_json(const DominanceReport& r) {
  nlohmann::json d = nlohmann::json::array();
  for (const auto& x : r.dominators) {
    d.push_back({{"trial", x.trial},
                 {"clause", x.clause},
                 {"min_agent_gain", x.min_agent_gain},
                 {"max_agent_gain", x.max_agent_gain},
                 {"insurer_gain", x.insurer_gain}});
  }
  return {{"seed", r.seed},
          {"trials", r.trials},
          {"feasible", r.feasible},
          {"input_ic", r.input_ic},
          {"input_ir", r.input_ir},
          {"dominated", r.dominated()},
          {"dominators", d}};
}

nlohmann::json to_json(const OracleResult& r) {
  nlohmann::json slopes = nlohmann::json::array();
  for (std::size_t i = 0; i < r.argmax_slopes.rows(); ++i) {
    const auto row = r.argmax_slopes.row(i);
    slopes.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"max_welfare", r.max_welfare},
          {"argmax_slopes", slopes},
          {"argmax_premia", r.argmax_premia},
          {"argmax_index", r.argmax_index},
          {"enumerated", r.enumerated},
          {"feasible_count", r.feasible_count},
          {"wall_time_s", r.wall_time_s}};
}

nlohmann::json to_json(const SynthesisResult& r) {
  return {{"regime", to_string(r.regime)},
          {"alpha", r.alpha},
          {"theta_alpha", opt(r.theta_alpha)},
          {"welfare", r.welfare},
          {"j_kind", r.profile.kind == JProfile::Kind::InsurerOnly ? "insurer_only" : "with_eta"},
          {"j_monotone", to_json(r.j_monotone)},
          {"ir_status", to_json(r.ir_status)},
          {"assumptions", to_json(r.assumptions)}};
}

}  // namespace dumenu
