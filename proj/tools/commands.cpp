#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "cli.hpp"
#include "dumenu/error.hpp"
#include "dumenu/menus.hpp"
#include "dumenu/oracle.hpp"
#include "dumenu/report_json.hpp"
#include "dumenu/synthesis.hpp"
#include "dumenu/verification.hpp"

namespace dumenu::cli {

namespace {

std::ofstream open_out(const ScenarioConfig& c, const std::string& file) {
  std::filesystem::create_directories(c.out_dir);
  const auto path = c.out_dir / file;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("out: cannot write '" + path.string() + "'");
  return out;
}

void write_json(const ScenarioConfig& c, const std::string& file, const nlohmann::json& j) {
  auto out = open_out(c, file);
  out << j.dump(2) << '\n';
}

SynthesisOptions synthesis_options(const ScenarioConfig& c, const RunOptions& opts) {
  SynthesisOptions so;
  so.tie_tol = c.tie_tol;
  so.strict = opts.strict;
  return so;
}

Menu read_menu(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("menu: cannot open '" + path.string() + "'");
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("menu: ") + e.what());
    }
    return menu_from_json(j);
  }
  return read_menu_csv(in);
}

}  // namespace

int run_synthesize(const ScenarioConfig& c, const RunOptions& opts, std::ostream& log) {
  const Scenario sc = build_scenario(c);
  const SynthesisResult result = synthesize(c.alpha, sc, synthesis_options(c, opts));
  const PropertyReport props = verify_optimal_properties(result, sc);
  const ImplicationReport implications = verify_ir_implications(result, sc);
  const ICReport ic = verify_ic(result.menu, sc, c.ic_tol);

  {
    auto csv = open_out(c, "menu.csv");
    write_menu_csv(result.menu, csv);
  }
  write_json(c, "menu.json", menu_to_json(result.menu));
  nlohmann::json j = to_json(result);
  j["scenario"] = c.name;
  j["ic"] = to_json(ic);
  j["properties"] = to_json(props);
  j["ir_implications"] = to_json(implications);
  write_json(c, "synthesis.json", j);

  log << "regime=" << to_string(result.regime) << " welfare=" << std::setprecision(10)
      << result.welfare;
  if (result.theta_alpha) log << " theta_alpha=" << *result.theta_alpha;
  log << " ic=" << (ic.passed() ? "pass" : "fail")
      << " ir=" << (result.ir_status.passed() ? "pass" : "fail") << '\n';
  return kOk;
}

int run_verify(const ScenarioConfig& c, const RunOptions& opts, std::ostream& log) {
  if (!opts.menu) throw ConfigError("menu: verify needs --menu PATH");
  const Scenario sc = build_scenario(c);
  const Menu menu = read_menu(*opts.menu);
  require_same_grids(menu, sc);

  const ICReport ic = verify_ic(menu, sc, c.ic_tol);
  const IRReport ir = verify_ir(menu, sc, c.ir_tol);
  const SubmodularityReport sub = check_submodular(menu.retention, menu.types, menu.losses);
  bool ok = ic.passed() && ir.passed();

  nlohmann::json j{{"scenario", c.name}, {"ic", to_json(ic)}, {"ir", to_json(ir)},
                   {"submodularity", to_json(sub)}};
  if (c.dominance_trials > 0) {
    DominanceOptions dopt;
    dopt.tol = c.ic_tol;
    dopt.workers = c.workers;
    const DominanceReport dom =
        pareto_dominance_search(menu, sc, c.alpha, c.dominance_trials, c.seed, {}, dopt);
    j["dominance"] = to_json(dom);
    ok = ok && !dom.dominated();
  }
  j["passed"] = ok;
  write_json(c, "verify.json", j);

  log << "ic=" << (ic.passed() ? "pass" : "fail") << " (" << ic.violations.size()
      << " violations) ir=" << (ir.passed() ? "pass" : "fail")
      << " submodular=" << (sub.passed ? "yes" : "no") << '\n';
  return ok ? kOk : kCheckFailed;
}

int run_oracle_compare(const ScenarioConfig& c, const RunOptions& opts, std::ostream& log) {
  const Scenario base = build_scenario(c);
  const SmallInstance inst =
      SmallInstance::from(base, c.oracle_types, c.oracle_cells, c.oracle_alphabet);
  const SynthesisResult syn = synthesize(c.alpha, inst.scenario, synthesis_options(c, opts));
  const OracleResult oracle = enumerate_optimum(inst, c.alpha, c.workers, c.ic_tol);
  const double gap = oracle.max_welfare - syn.welfare;

  nlohmann::json j{{"scenario", c.name},
                   {"alpha", c.alpha},
                   {"types", c.oracle_types},
                   {"cells", c.oracle_cells},
                   {"synthesized_welfare", syn.welfare},
                   {"oracle_welfare", oracle.max_welfare},
                   {"gap", gap},
                   {"feasible_count", oracle.feasible_count},
                   {"wall_time_s", oracle.wall_time_s},
                   {"synthesized_menu", menu_to_json(syn.menu)},
                   {"oracle", to_json(oracle)}};
  write_json(c, "oracle_compare.json", j);

  log << "synthesized=" << std::setprecision(12) << syn.welfare << " oracle=" << oracle.max_welfare
      << " gap=" << gap << " feasible=" << oracle.feasible_count << "/" << oracle.enumerated
      << " time=" << std::setprecision(3) << oracle.wall_time_s << "s\n";
  return kOk;
}

int run_conditions(const ScenarioConfig& c, const RunOptions& opts, std::ostream& log) {
  const Scenario sc = build_scenario(c);
  const ConditionsReport cond = check_sufficient_conditions(sc, c.alpha, c.ordering);
  const AssumptionReport assumptions = check_scenario_assumptions(sc, c.ordering);
  write_json(c, "conditions.json",
             {{"scenario", c.name}, {"conditions", to_json(cond)}, {"assumptions", to_json(assumptions)}});

  log << "assumptions=" << (assumptions.passed ? "pass" : "fail")
      << " sufficient=" << (cond.sufficient_passed ? "pass" : "fail")
      << " grid_monotone=" << (cond.grid_monotone.passed ? "pass" : "fail") << '\n';
  if (opts.strict && !assumptions.passed) return kAssumptionFailure;
  return kOk;
}

void write_sweep_csv(const ScenarioConfig& c, std::ostream& out) {
  if (c.sweep_alphas.empty()) throw ConfigError("sweep.alphas: empty alpha list");
  const Scenario sc = build_scenario(c);
  SynthesisOptions so;
  so.tie_tol = c.tie_tol;
  out << "alpha,regime,theta_alpha,welfare,aggregate_insurer_utility,min_agent_margin\n";
  out << std::setprecision(17);
  for (double a : c.sweep_alphas) {
    const SynthesisResult r = synthesize(a, sc, so);
    out << a << ',' << to_string(r.regime) << ',';
    if (r.theta_alpha) out << *r.theta_alpha;
    out << ',' << r.welfare << ',' << aggregate_insurer_utility(r.menu, sc) << ','
        << r.ir_status.p1_worst << '\n';
  }
}

int run_alpha_sweep(const ScenarioConfig& c, const RunOptions& opts, std::ostream& log) {
  if (c.sweep_alphas.empty()) throw ConfigError("sweep.alphas: empty alpha list");
  if (opts.strict) {
    const AssumptionReport a = check_scenario_assumptions(build_scenario(c), c.ordering);
    if (!a.passed) throw AssumptionViolated("scenario '" + c.name + "' fails its assumption checks");
  }
  auto out = open_out(c, "alpha_sweep.csv");
  write_sweep_csv(c, out);
  log << "wrote " << (c.out_dir / "alpha_sweep.csv").string() << " (" << c.sweep_alphas.size()
      << " rows)\n";
  return kOk;
}

}  // namespace dumenu::cli
