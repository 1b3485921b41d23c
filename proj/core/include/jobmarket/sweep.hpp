#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "jobmarket/config.hpp"
#include "jobmarket/market.hpp"
#include "jobmarket/metrics.hpp"

namespace jobmarket {

std::string version_string();

/// Participation rates of the standard sweep: 0, 5, 20, 50, 90, 100 percent.
std::vector<double> default_rho_grid();

std::vector<MechanismSpec> questionnaire_arms(std::span<const double> rhos);

/// Loads or generates departments and resolves m and p_d from them.
Market build_market(const RunOptions& options);

struct ReplicationOutput {
  int replication = 0;
  std::vector<MetricRow> rows;
  // participants[arm][year - 1]: sorted participant ids of that year's cohort.
  std::vector<std::vector<std::vector<int>>> participants;
};

using SnapshotHook = std::function<void(const MechanismSpec&, int replication, const YearSnapshot&)>;

/// One burn-in shared by all arms, then each arm's horizon from a copy of the
/// burn-in history. Arms see identical activation and cohort draws.
ReplicationOutput run_replication(const Market& market, std::span<const MechanismSpec> arms,
                                  int replication, const SnapshotHook& hook = {},
                                  bool keep_diagnostics = false);

struct RunManifest {
  std::string command;
  RunOptions options;
  std::vector<MechanismSpec> arms;
  std::vector<double> rho_grid;
};

/// Files of one run directory.
struct RunLayout {
  std::filesystem::path root;
  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path metrics() const { return root / "metrics.csv"; }
  std::filesystem::path summary() const { return root / "summary.json"; }
  std::filesystem::path diagnostics() const { return root / "diagnostics"; }
};

void write_manifest(const RunLayout& layout, const RunManifest& manifest);
void write_summary(const RunLayout& layout, const std::map<SummaryKey, SummaryStat>& summary);

struct RunResult {
  std::vector<MetricRow> rows;
  std::map<SummaryKey, SummaryStat> summary;
  std::vector<ReplicationOutput> replications;  // rows moved out; participants kept
};

/// Writes the manifest, then metrics.csv replication by replication,
/// optional diagnostics, and summary.json last.
RunResult execute_run(const Market& market, const RunManifest& manifest, const RunLayout& layout);

/// Same computation without touching the filesystem.
RunResult execute_in_memory(const Market& market, std::span<const MechanismSpec> arms, int replications);

}  // namespace jobmarket
