#pragma once

#include <nlohmann/json.hpp>

#include "dumenu/oracle.hpp"
#include "dumenu/report.hpp"
#include "dumenu/synthesis.hpp"
#include "dumenu/verification.hpp"

namespace dumenu {

// JSON views of every report. Keys are lowercase snake case and stable.
nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const AssumptionReport& r);
nlohmann::json to_json(const IRReport& r);
nlohmann::json to_json(const ICReport& r);
nlohmann::json to_json(const ViolationRecord& v);
nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const ImplicationReport& r);
nlohmann::json to_json(const ConditionsReport& r);
nlohmann::json to_json(const SubmodularityReport& r);
nlohmann::json to_json(const DominanceReport& r);
nlohmann::json to_json(const OracleResult& r);

/// Regime, theta_alpha, welfare and diagnostics. The menu itself is written
/// separately with menu_to_json.
nlohmann::json to_json(const SynthesisResult& r);

}  // namespace dumenu
