#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "jobmarket/acceptance.hpp"
#include "jobmarket/dataset.hpp"
#include "jobmarket/error.hpp"
#include "jobmarket/probes.hpp"
#include "jobmarket/rng.hpp"
#include "jobmarket/sweep.hpp"
#include "jobmarket/validation.hpp"

namespace jobmarket::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

RunLayout layout_for(const Invocation& inv) { return {fs::path(inv.options.out) / inv.run_id}; }

const SummaryStat* find_stat(const std::map<SummaryKey, SummaryStat>& summary, const MechanismSpec& arm,
                             const std::string& metric, const std::string& stratum) {
  const auto it = summary.find({arm.name(), arm.effective_rho(), metric, stratum});
  return it == summary.end() ? nullptr : &it->second;
}

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

void print_table(const std::vector<MechanismSpec>& arms, const std::map<SummaryKey, SummaryStat>& summary) {
  const std::vector<std::pair<std::string, std::string>> columns{
      {"matching_rate", "all"},
      {"candidate_welfare_total", "all"},
      {"share_unfilled", "all"},
      {"blocking_rate", "all"}};
  std::cout << std::left << std::setw(24) << "arm";
  for (const auto& [metric, stratum] : columns) std::cout << std::setw(26) << metric;
  std::cout << '\n';
  for (const auto& arm : arms) {
    std::cout << std::setw(24) << arm.name() + " rho=" + fmt(arm.effective_rho(), 3);
    for (const auto& [metric, stratum] : columns) {
      const auto* s = find_stat(summary, arm, metric, stratum);
      std::cout << std::setw(26) << (s ? fmt(s->mean) + " (" + fmt(s->se, 2) + ")" : std::string("-"));
    }
    std::cout << '\n';
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size() || !(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("--grid: '" + item + "' is not a participation rate in [0, 1]");
    }
    grid.push_back(v);
  }
  if (grid.empty()) throw ConfigError("--grid is empty");
  return grid;
}

int report(const std::vector<CheckResult>& checks, const fs::path& path, const json& extra) {
  json items = json::array();
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    items.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
  }
  json j = extra;
  j["checks"] = items;
  j["pass"] = all;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
  return all ? 0 : kValidationFailure;
}

}  // namespace

int run_simulate(const Invocation& inv) {
  const Market market = build_market(inv.options);
  const RunManifest manifest{inv.command, inv.options, {inv.options.mechanism_spec()}, {}};
  const auto result = execute_run(market, manifest, layout_for(inv));
  print_table(manifest.arms, result.summary);
  std::cout << "wrote " << layout_for(inv).root.string() << '\n';
  return 0;
}

int run_sweep(const Invocation& inv, const SweepArgs& args) {
  if (parse_mechanism(inv.options.mechanism) != MechanismSpec::Kind::questionnaire) {
    throw ConfigError("sweep-rho varies the questionnaire participation rate; use --compare to add aea and da arms");
  }
  const auto grid = args.grid.empty() ? default_rho_grid() : parse_grid(args.grid);
  auto arms = questionnaire_arms(grid);
  if (args.compare) {
    arms.push_back(MechanismSpec::aea(inv.options.signal_count));
    arms.push_back(MechanismSpec::deferred_acceptance());
  }
  const Market market = build_market(inv.options);
  const RunManifest manifest{inv.command, inv.options, arms, grid};
  const auto result = execute_run(market, manifest, layout_for(inv));
  print_table(arms, result.summary);
  std::cout << "wrote " << layout_for(inv).root.string() << '\n';
  return 0;
}

int run_validate_coverage(const Invocation& inv, const CoverageArgs& args) {
  const auto layout = layout_for(inv);
  write_manifest(layout, {inv.command, inv.options, {}, {}});

  CoverageConfig cfg;
  cfg.trials = args.trials;
  cfg.pool = args.pool;
  cfg.k = std::min(args.k, args.pool);
  cfg.B = inv.options.market.B;
  cfg.alpha = inv.options.market.alpha;
  cfg.seed = derive_seed(inv.options.market.seed, Stream::validation, 1);
  const auto cov = run_coverage_suite(cfg);

  // Two binomial standard deviations below the nominal level.
  const double nominal = 1.0 - cfg.alpha;
  const double threshold = nominal - 2.0 * std::sqrt(nominal * (1.0 - nominal) / cfg.trials);
  const auto red = run_degenerate_reduction(args.instances, derive_seed(inv.options.market.seed, Stream::validation, 2));
  const auto da = run_da_stability(5, 200, derive_seed(inv.options.market.seed, Stream::validation, 3));

  const std::vector<CheckResult> checks{
      {"rank_coverage", cov.rank_coverage() >= threshold,
       fmt(cov.rank_coverage()) + " >= " + fmt(threshold) + " over " + std::to_string(cov.trials) + " trials"},
      {"top_k_inclusion", cov.top_k_coverage() >= threshold,
       fmt(cov.top_k_coverage()) + " >= " + fmt(threshold) + " over " + std::to_string(cov.trials) + " trials"},
      {"zero_variance_reduction", red.mismatches == 0,
       std::to_string(red.mismatches) + " mismatches in " + std::to_string(red.instances) + " instances"},
      {"da_stability", da.unstable == 0,
       std::to_string(da.unstable) + " unstable in " + std::to_string(da.instances) + " instances"}};
  const json extra{{"rank_coverage", cov.rank_coverage()},
                   {"top_k_coverage", cov.top_k_coverage()},
                   {"threshold", threshold},
                   {"trials", cov.trials},
                   {"pool", cfg.pool},
                   {"k", cfg.k},
                   {"B", cfg.B},
                   {"alpha", cfg.alpha}};
  return report(checks, layout.root / "validation.json", extra);
}

int run_validate_theorems(const Invocation& inv, const TheoremArgs& args) {
  const auto grid = default_rho_grid();
  const auto arms = questionnaire_arms(grid);
  const Market market = build_market(inv.options);
  const auto layout = layout_for(inv);
  const auto result = execute_run(market, {inv.command, inv.options, arms, grid}, layout);
  const auto& summary = result.summary;
  std::vector<CheckResult> checks;
  json extra;

  // Disclosure dominance at every interior rate.
  bool dominance = true;
  std::string detail;
  for (const auto& arm : arms) {
    if (arm.rho <= 0.0 || arm.rho >= 1.0) continue;
    const auto* p = find_stat(summary, arm, "candidate_welfare_mean", "participant");
    const auto* np = find_stat(summary, arm, "candidate_welfare_mean", "nonparticipant");
    const bool ok = p && np && p->mean > np->mean;
    dominance = dominance && ok;
    detail += "rho=" + fmt(arm.rho, 3) + ": " + (p ? fmt(p->mean) : "-") + " vs " + (np ? fmt(np->mean) : "-") + "; ";
  }
  checks.push_back({"disclosure_dominance", dominance, detail});

  // Misreport gain against the K / n_c bound.
  std::vector<double> gains;
  bool bounded = true;
  detail.clear();
  for (int clones : {25, 100}) {
    CloneInstance inst;
    inst.clones = clones;
    inst.beta = inv.options.market.beta;
    inst.items = inv.options.market.p_d;
    inst.simulations = args.probe_simulations;
    inst.seed = derive_seed(inv.options.market.seed, Stream::probe, static_cast<std::uint64_t>(clones));
    Rng rng(derive_seed(inst.seed, Stream::misreport));
    inst.true_prefs.resize(static_cast<std::size_t>(inst.items));
    for (auto& q : inst.true_prefs) q = rng.uniform();
    const auto grid_reports = default_misreport_grid(inst.true_prefs, 8, derive_seed(inst.seed, Stream::misreport, 1));
    const auto r = misreport_gain_probe(inst, grid_reports);
    const bool ok = r.max_gain() <= r.bound + 3.0 * r.max_gain_se();
    bounded = bounded && ok;
    gains.push_back(r.max_gain());
    detail += "n_c=" + std::to_string(clones) + ": gain " + fmt(r.max_gain()) + " (" + r.labels[r.best] +
              ", se " + fmt(r.max_gain_se(), 2) + ") bound " + fmt(r.bound) + "; ";
    extra["misreport"][std::to_string(clones)] = {
        {"gain", r.gain}, {"se", r.gain_se}, {"labels", r.labels}, {"bound", r.bound}};
  }
  checks.push_back({"misreport_bound", bounded && gains[1] < gains[0], detail});

  // Informativeness over nested questionnaire prefixes.
  InformativenessInstance info;
  info.simulations = args.informativeness_simulations;
  info.seed = derive_seed(inv.options.market.seed, Stream::probe, 3);
  const auto ir = dept_informativeness_probe(info);
  bool monotone = true;
  detail.clear();
  for (std::size_t s = 0; s < ir.step_gain.size(); ++s) {
    monotone = monotone && ir.step_gain[s] >= -2.0 * ir.step_se[s];
    detail += std::to_string(ir.dims[s]) + "->" + std::to_string(ir.dims[s + 1]) + ": " + fmt(ir.step_gain[s]) +
              " (se " + fmt(ir.step_se[s], 2) + "); ";
  }
  checks.push_back({"informativeness_monotone", monotone, detail});
  extra["informativeness"] = {{"dims", ir.dims}, {"welfare", ir.welfare}, {"se", ir.welfare_se}};

  // Blocking-pair rate falls with participation.
  std::vector<double> x, y;
  for (const auto& arm : arms) {
    if (const auto* s = find_stat(summary, arm, "blocking_rate", "all")) {
      for (double v : s->per_replication) {
        x.push_back(arm.rho);
        y.push_back(v);
      }
    }
  }
  const auto sp = spearman(x, y);
  checks.push_back({"blocking_rate_trend", sp.rho < 0.0 && sp.p_value < 0.05,
                    "spearman " + fmt(sp.rho) + ", p " + fmt(sp.p_value, 3) + ", n " + std::to_string(sp.n)});
  const auto da = run_da_stability(5, 200, derive_seed(inv.options.market.seed, Stream::validation, 3));
  checks.push_back({"da_stability", da.unstable == 0,
                    std::to_string(da.unstable) + " unstable in " + std::to_string(da.instances) + " instances"});
  extra["blocking_spearman"] = {{"rho", sp.rho}, {"p_value", sp.p_value}, {"n", sp.n}};

  return report(checks, layout.root / "theorems.json", extra);
}

int run_gen_data(const Invocation& inv, const GenDataArgs& args) {
  const auto layout = layout_for(inv);
  write_manifest(layout, {inv.command, inv.options, {}, {}});
  const Market market = build_market(inv.options);
  {
    std::ofstream f(layout.root / "departments.csv");
    if (!f) throw std::runtime_error("cannot write " + (layout.root / "departments.csv").string());
    write_departments_csv(f, market.departments);
  }
  if (args.history) {
    const auto history = run_burn_in(market, 0);
    std::ofstream f(layout.root / "history.csv");
    if (!f) throw std::runtime_error("cannot write " + (layout.root / "history.csv").string());
    write_history_csv(f, history);
  }
  std::cout << "wrote " << layout.root.string() << '\n';
  return 0;
}

}  // namespace jobmarket::cli
