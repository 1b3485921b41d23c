#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <vector>

#include "commands.hpp"
#include "jobmarket/error.hpp"
#include "jobmarket/sweep.hpp"

using namespace jobmarket;

namespace {

struct Common {
  std::string config_path;
  std::string run_id;
  std::map<std::string, std::vector<std::string>> values;
  std::map<std::string, CLI::Option*> options;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Config file of key = value lines");
  sub->add_option("--run-id", c.run_id, "Output subdirectory name (default: <command>-<seed>)");
  for (const auto& key : setting_keys()) {
    auto* opt = sub->add_option("--" + key, c.values[key], "Override config key '" + key + "'");
    if (key == "diagnostics") {
      opt->expected(0, 1);
    } else if (key == "tier_boundaries") {
      // CLI11 splits a bracketed argument like "[10, 25, 50]" into items.
      opt->expected(0, CLI::detail::expected_max_vector_size)->delimiter(',');
    } else {
      opt->expected(1);
    }
    c.options[key] = opt;
  }
  c.options["reps"] = sub->add_option("--reps", c.values["reps"], "Replications (alias of --replications)")->expected(1);
  c.options["bootstrap"] = sub->add_option("--bootstrap", c.values["bootstrap"], "Bootstrap draws (alias of --B)")->expected(1);
}

// Defaults, then the config file, then flags.
cli::Invocation resolve(const std::string& command, const Common& c) {
  cli::Invocation inv;
  inv.command = command;
  if (!c.config_path.empty()) load_config_file(c.config_path, inv.options);
  for (const auto& [key, opt] : c.options) {
    if (opt->count() == 0) continue;
    const auto& vals = c.values.at(key);
    if (key == "tier_boundaries") {
      std::string list;
      for (const auto& v : vals) list += (list.empty() ? "" : ",") + v;
      apply_setting(inv.options, key, "[" + list + "]");
    } else {
      apply_setting(inv.options, key, vals.empty() || vals.back().empty() ? "true" : vals.back());
    }
  }
  inv.options.market.validate();
  inv.options.mechanism_spec();
  inv.run_id = c.run_id.empty() ? command + "-" + std::to_string(inv.options.market.seed) : c.run_id;
  return inv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed-deterministic academic job market simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  Common simulate_c, sweep_c, coverage_c, theorem_c, gen_c;
  cli::SweepArgs sweep_args;
  cli::CoverageArgs coverage_args;
  cli::TheoremArgs theorem_args;
  cli::GenDataArgs gen_args;

  auto* simulate = app.add_subcommand("simulate", "Run one mechanism arm");
  add_common(simulate, simulate_c);

  auto* sweep = app.add_subcommand("sweep-rho", "Run the participation-rate grid on shared seeds");
  add_common(sweep, sweep_c);
  sweep->add_option("--grid", sweep_args.grid, "Comma-separated participation rates");
  sweep->add_flag("--compare", sweep_args.compare, "Add aea and da arms");

  auto* coverage = app.add_subcommand("validate-coverage", "Monte Carlo checks of the ranking guarantees");
  add_common(coverage, coverage_c);
  coverage->add_option("--trials", coverage_args.trials, "Coverage trials")->check(CLI::PositiveNumber);
  coverage->add_option("--pool", coverage_args.pool, "Pool size")->check(CLI::PositiveNumber);
  coverage->add_option("--k", coverage_args.k, "Interview slots")->check(CLI::PositiveNumber);
  coverage->add_option("--instances", coverage_args.instances, "Zero-variance reduction instances")
      ->check(CLI::PositiveNumber);

  auto* theorems = app.add_subcommand("validate-theorems", "Empirical probes of the incentive and stability results");
  add_common(theorems, theorem_c);
  theorems->add_option("--probe-sims", theorem_args.probe_simulations, "Simulations per misreport probe")
      ->check(CLI::Range(2, 100000000));
  theorems->add_option("--info-sims", theorem_args.informativeness_simulations,
                       "Simulations for the informativeness probe")
      ->check(CLI::Range(2, 100000000));

  auto* gen = app.add_subcommand("gen-data", "Write a synthetic department CSV");
  add_common(gen, gen_c);
  gen->add_flag("--history", gen_args.history, "Also write the burn-in offer history of replication 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  try {
    if (*simulate) return cli::run_simulate(resolve("simulate", simulate_c));
    if (*sweep) return cli::run_sweep(resolve("sweep-rho", sweep_c), sweep_args);
    if (*coverage) return cli::run_validate_coverage(resolve("validate-coverage", coverage_c), coverage_args);
    if (*theorems) return cli::run_validate_theorems(resolve("validate-theorems", theorem_c), theorem_args);
    if (*gen) return cli::run_gen_data(resolve("gen-data", gen_c), gen_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsageError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kValidationFailure;
  }
  return cli::kUsageError;
}
