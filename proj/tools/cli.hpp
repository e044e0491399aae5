#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dumenu/scenario.hpp"

namespace dumenu::cli {

// Family name plus its numeric parameters, e.g. agent = power with a, b.
struct FamilySpec {
  std::string family;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
};

struct ScenarioConfig {
  std::string name = "custom";
  double type_lo = 0.0;
  double type_hi = 1.0;
  std::size_t type_count = 41;
  double loss_cap = 1.0;
  std::size_t loss_cells = 201;
  FamilySpec mu{"uniform", {}};
  FamilySpec eta{"uniform", {}};
  FamilySpec agent{"power", {{"a", 1.0}, {"b", 1.0}}};
  FamilySpec insurer{"identity", {}};
  FamilySpec loss{"power", {{"kappa", 1.0}}};
  double alpha = 0.25;
  OrderingMode ordering = OrderingMode::MoreAverseLargerLoss;

  double ic_tol = 1e-6;
  double ir_tol = 1e-6;
  double tie_tol = 1e-9;
  std::uint64_t seed = 0;

  std::size_t oracle_types = 3;
  std::size_t oracle_cells = 4;
  std::vector<double> oracle_alphabet{0.0, 0.5, 1.0};
  unsigned workers = 0;
  std::size_t dominance_trials = 0;

  std::vector<double> sweep_alphas;
  std::filesystem::path out_dir = "out";
};

// Accepts decimals and simple fractions such as "1/3". Throws ConfigError naming `field`.
double parse_number(const std::string& text, const std::string& field);
std::vector<double> parse_number_list(const std::string& text, const std::string& field);

// Built-in scenarios expressed as configs: s1, s2, s3.
ScenarioConfig builtin_config(const std::string& name);

// Flat "key = value" lines, '#' comments, dotted section keys (types.count, mu.family, ...).
// A leading "scenario = s1" starts from that built-in. Unknown keys are errors.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

// Range and family checks; throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

Scenario build_scenario(const ScenarioConfig& config);

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kAssumptionFailure = 2,
  kOracleCap = 3,
  kCheckFailed = 4,
};

struct RunOptions {
  bool strict = false;
  std::optional<std::filesystem::path> menu;
};

// Each command writes its artifacts under config.out_dir and a short summary to `log`.
int run_synthesize(const ScenarioConfig& config, const RunOptions& opts, std::ostream& log);
int run_verify(const ScenarioConfig& config, const RunOptions& opts, std::ostream& log);
int run_oracle_compare(const ScenarioConfig& config, const RunOptions& opts, std::ostream& log);
int run_conditions(const ScenarioConfig& config, const RunOptions& opts, std::ostream& log);
int run_alpha_sweep(const ScenarioConfig& config, const RunOptions& opts, std::ostream& log);

// Column order: alpha,regime,theta_alpha,welfare,aggregate_insurer_utility,min_agent_margin
void write_sweep_csv(const ScenarioConfig& config, std::ostream& out);

}  // namespace dumenu::cli
