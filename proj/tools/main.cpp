#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "dumenu/error.hpp"

using namespace dumenu;

namespace {

struct Args {
  std::string config;
  std::string scenario;
  std::string alpha;
  std::string alphas;
  std::string out;
  std::string menu;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned workers = 0;
  bool workers_set = false;
  std::size_t trials = 0;
  bool trials_set = false;
  bool strict = false;
};

cli::ScenarioConfig resolve(const Args& a) {
  cli::ScenarioConfig c;
  if (!a.config.empty()) {
    c = cli::load_config(a.config);
  } else if (!a.scenario.empty()) {
    c = cli::builtin_config(a.scenario);
  } else {
    throw ConfigError("config: pass --config PATH or --scenario NAME");
  }
  if (!a.alpha.empty()) c.alpha = cli::parse_number(a.alpha, "alpha");
  if (!a.alphas.empty()) c.sweep_alphas = cli::parse_number_list(a.alphas, "sweep.alphas");
  if (!a.out.empty()) c.out_dir = a.out;
  if (a.seed_set) c.seed = a.seed;
  if (a.workers_set) c.workers = a.workers;
  if (a.trials_set) c.dominance_trials = a.trials;
  cli::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal insurance menus under dual utility"};
  app.require_subcommand(1);
  Args args;

  using Runner = int (*)(const cli::ScenarioConfig&, const cli::RunOptions&, std::ostream&);
  const std::pair<const char*, Runner> commands[] = {
      {"synthesize", cli::run_synthesize},
      {"verify", cli::run_verify},
      {"oracle-compare", cli::run_oracle_compare},
      {"conditions", cli::run_conditions},
      {"alpha-sweep", cli::run_alpha_sweep},
  };
  const char* help[] = {
      "Build the optimal menu; writes menu.csv, menu.json, synthesis.json",
      "Check IC/IR of a menu file against the scenario; writes verify.json",
      "Brute-force a small instance and compare welfare; writes oracle_compare.json",
      "Evaluate sufficient conditions and assumptions; writes conditions.json",
      "Regime, welfare and margins per alpha; writes alpha_sweep.csv",
  };

  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", args.config, "Scenario config file (key = value)");
    sub->add_option("--scenario", args.scenario, "Built-in scenario: s1, s2, s3");
    sub->add_option("--alpha", args.alpha, "Social weight in [0, 1]; fractions like 1/3 accepted");
    sub->add_option("--out", args.out, "Output directory");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { args.seed = s, args.seed_set = true; }, "RNG seed");
    sub->add_option_function<unsigned>(
        "--workers", [&](unsigned w) { args.workers = w, args.workers_set = true; },
        "Worker threads (0 = hardware)");
    sub->add_flag("--strict", args.strict, "Fail with exit 2 when assumption checks fail");
    subs.push_back(sub);
  }
  subs[1]->add_option("--menu", args.menu, "Menu file (.csv or .json)")->required();
  subs[1]->add_option_function<std::size_t>(
      "--trials", [&](std::size_t t) { args.trials = t, args.trials_set = true; },
      "Pareto dominance trials (0 = skip)");
  subs[4]->add_option("--alphas", args.alphas, "Comma separated alphas, e.g. 0.1,1/3,0.4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kConfigError;
  }

  try {
    const cli::ScenarioConfig config = resolve(args);
    cli::RunOptions opts;
    opts.strict = args.strict;
    if (!args.menu.empty()) opts.menu = args.menu;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return commands[i].second(config, opts, std::cout);
    }
  } catch (const AssumptionViolated& e) {
    std::cerr << "assumption failure: " << e.what() << '\n';
    return cli::kAssumptionFailure;
  } catch (const InstanceTooLarge& e) {
    std::cerr << "oracle: " << e.what() << '\n';
    return cli::kOracleCap;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kConfigError;
  }
  return cli::kConfigError;
}
