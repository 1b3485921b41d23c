#include "jobmarket/sweep.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "csv_util.hpp"
#include "jobmarket/dataset.hpp"
#include "jobmarket/error.hpp"

#ifndef JOBMARKET_VERSION
#define JOBMARKET_VERSION "0.0.0"
#endif

namespace jobmarket {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return JOBMARKET_VERSION; }

std::vector<double> default_rho_grid() { return {0.0, 0.05, 0.2, 0.5, 0.9, 1.0}; }

std::vector<MechanismSpec> questionnaire_arms(std::span<const double> rhos) {
  std::vector<MechanismSpec> arms;
  for (double r : rhos) arms.push_back(MechanismSpec::questionnaire(r));
  return arms;
}

Market build_market(const RunOptions& options) {
  MarketConfig cfg = options.market;
  std::vector<DepartmentProfile> depts;
  if (options.departments == "synthetic") {
    cfg.validate();
    depts = generate_departments(cfg, cfg.seed);
  } else {
    depts = load_departments(options.departments, cfg.p_v, cfg.capacity_default);
    cfg.m = static_cast<int>(depts.size());
    cfg.p_d = static_cast<int>(depts.front().attributes.size());
    if (!depts.front().utility_weights.empty()) cfg.p_v = static_cast<int>(depts.front().utility_weights.size());
  }
  return Market(std::move(cfg), std::move(depts));
}

ReplicationOutput run_replication(const Market& market, std::span<const MechanismSpec> arms,
                                  int replication, const SnapshotHook& hook, bool keep_diagnostics) {
  ReplicationOutput out;
  out.replication = replication;
  out.participants.resize(arms.size());
  const HistoryDataset burn_in = run_burn_in(market, replication);
  for (std::size_t a = 0; a < arms.size(); ++a) {
    HistoryDataset history = burn_in;
    const MechanismSpec& arm = arms[a];
    run_horizon(
        market, arm, replication, history,
        [&](const YearSnapshot& snap) {
          auto rows = year_metric_rows(snap, replication);
          out.rows.insert(out.rows.end(), std::make_move_iterator(rows.begin()),
                          std::make_move_iterator(rows.end()));
          std::vector<int> part;
          for (const auto& c : snap.cohort) {
            if (c.participates) part.push_back(c.id);
          }
          out.participants[a].push_back(std::move(part));
          if (hook) hook(arm, replication, snap);
        },
        keep_diagnostics);
  }
  return out;
}

namespace {

json config_json(const RunOptions& options) {
  json j = json::object();
  for (const auto& [k, v] : describe(options)) j[k] = v;
  return j;
}

json arm_json(const MechanismSpec& arm) {
  json j{{"mechanism", arm.name()}, {"rho", arm.effective_rho()}};
  if (arm.kind == MechanismSpec::Kind::aea) j["signal_count"] = arm.signal_count;
  return j;
}

void write_diagnostics(const fs::path& dir, const MechanismSpec& arm, int replication,
                       const YearSnapshot& snap) {
  const fs::path sub = dir / (arm.name() + "_rho" + detail::format_double(arm.effective_rho()));
  fs::create_directories(sub);
  for (const auto& d : snap.diagnostics) {
    std::ofstream f(sub / ("rep" + std::to_string(replication) + "_year" + std::to_string(snap.year) +
                           "_dept" + std::to_string(d.dept_id) + ".csv"));
    f << "cand_id,u_hat,rank_lower,included\n";
    for (std::size_t p = 0; p < d.cand_id.size(); ++p) {
      f << d.cand_id[p] << ',' << detail::format_double(d.u_hat[p]) << ',' << d.rank_lower[p] << ','
        << (d.included[p] ? 1 : 0) << '\n';
    }
  }
}

}  // namespace

void write_manifest(const RunLayout& layout, const RunManifest& manifest) {
  fs::create_directories(layout.root);
  json arms = json::array();
  for (const auto& a : manifest.arms) arms.push_back(arm_json(a));
  const json j{{"command", manifest.command},
               {"version", version_string()},
               {"seed", manifest.options.market.seed},
               {"config", config_json(manifest.options)},
               {"arms", arms},
               {"rho_grid", manifest.rho_grid},
               {"layout",
                {{"manifest", "manifest.json"},
                 {"metrics", "metrics.csv"},
                 {"summary", "summary.json"},
                 {"diagnostics", manifest.options.diagnostics ? "diagnostics/" : ""}}}};
  std::ofstream f(layout.manifest());
  if (!f) throw std::runtime_error("cannot write " + layout.manifest().string());
  f << j.dump(2) << '\n';
}

void write_summary(const RunLayout& layout, const std::map<SummaryKey, SummaryStat>& summary) {
  json groups = json::array();
  for (const auto& [k, s] : summary) {
    groups.push_back({{"mechanism", k.mechanism},
                      {"rho", k.rho},
                      {"metric", k.metric},
                      {"stratum", k.stratum},
                      {"mean", s.mean},
                      {"se", s.se},
                      {"replications", s.replications}});
  }
  std::ofstream f(layout.summary());
  if (!f) throw std::runtime_error("cannot write " + layout.summary().string());
  f << json{{"version", version_string()}, {"groups", groups}}.dump(2) << '\n';
}

RunResult execute_run(const Market& market, const RunManifest& manifest, const RunLayout& layout) {
  write_manifest(layout, manifest);
  std::ofstream metrics(layout.metrics());
  if (!metrics) throw std::runtime_error("cannot write " + layout.metrics().string());
  write_metric_header(metrics);
  const bool diag = manifest.options.diagnostics;
  SnapshotHook hook;
  if (diag) {
    hook = [&](const MechanismSpec& arm, int rep, const YearSnapshot& snap) {
      write_diagnostics(layout.diagnostics(), arm, rep, snap);
    };
  }
  RunResult result;
  for (int r = 0; r < market.config.replications; ++r) {
    ReplicationOutput rep = run_replication(market, manifest.arms, r, hook, diag);
    write_metric_rows(metrics, rep.rows);
    metrics.flush();
    result.rows.insert(result.rows.end(), rep.rows.begin(), rep.rows.end());
    rep.rows.clear();
    result.replications.push_back(std::move(rep));
  }
  result.summary = summarize(result.rows);
  write_summary(layout, result.summary);
  return result;
}

RunResult execute_in_memory(const Market& market, std::span<const MechanismSpec> arms, int replications) {
  RunResult result;
  for (int r = 0; r < replications; ++r) {
    ReplicationOutput rep = run_replication(market, arms, r);
    result.rows.insert(result.rows.end(), rep.rows.begin(), rep.rows.end());
    rep.rows.clear();
    result.replications.push_back(std::move(rep));
  }
  result.summary = summarize(result.rows);
  return result;
}

}  // namespace jobmarket
