#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "jobmarket/acceptance.hpp"
#include "jobmarket/mechanisms.hpp"
#include "jobmarket/offers.hpp"
#include "jobmarket/tiers.hpp"
#include "jobmarket/types.hpp"

namespace jobmarket {

/// Fixed part of one simulated market: configuration and departments with
/// tiers assigned. Shared read-only by every replication.
struct Market {
  MarketConfig config;
  std::vector<DepartmentProfile> departments;
  AlignmentParams alignment;

  /// Assigns department tiers from config.tier_boundaries. Throws ConfigError
  /// when the departments do not match the configured dimensions.
  Market(MarketConfig cfg, std::vector<DepartmentProfile> depts);

  int m() const { return static_cast<int>(departments.size()); }
  int n() const { return config.n; }
};

enum class Phase : std::uint64_t { burn_in = 1, horizon = 2 };

/// Seeds for one (replication, phase, year) cell. Every purpose has its own
/// stream, so arms that share a replication see identical activation,
/// cohort and participation draws.
struct YearSeeds {
  std::uint64_t activation = 0;
  std::uint64_t cohort = 0;
  std::uint64_t participation = 0;
  std::uint64_t bootstrap = 0;
};

YearSeeds year_seeds(std::uint64_t master, int replication, Phase phase, int year);

std::vector<bool> draw_activation(int departments, double probability, std::uint64_t seed);

/// Fresh truthful cohort with no disclosures. Quality dimensions use a
/// Gaussian copula with the configured correlation; questionnaire items use
/// a factor copula. All marginals are uniform on [0, 1].
std::vector<CandidateProfile> draw_cohort(const MarketConfig& cfg, std::uint64_t seed);

/// Shared random order whose prefixes are the participant sets.
std::vector<int> participation_order(int candidates, std::uint64_t seed);

/// How active departments rank their pools.
struct Ranker {
  enum class Mode { plugin, calibrated };
  Mode mode = Mode::plugin;
  const AcceptanceModel* model = nullptr;        // plugin
  const AcceptanceEnsemble* ensemble = nullptr;  // calibrated
  double alpha = 0.1;
};

/// Audit record of one department's ranking step.
struct DepartmentDiagnostics {
  int dept_id = 0;
  std::vector<int> cand_id;
  std::vector<double> u_hat;
  std::vector<int> rank_lower;
  std::vector<bool> included;
  double quantile = 0.0;
  bool degenerate = false;
};

/// Everything observed in one simulated year. Matrices are department-major
/// (m x n): entry j * n + i.
struct YearSnapshot {
  int year = 0;
  MechanismSpec::Kind mechanism = MechanismSpec::Kind::questionnaire;
  double rho = 0.0;
  std::vector<bool> active;
  std::vector<CandidateProfile> cohort;
  std::vector<int> department_tier;
  std::vector<int> candidate_tier;
  std::vector<std::vector<int>> pools;  // per department; empty when inactive
  std::vector<double> floors;
  std::vector<double> f_true;
  std::vector<double> f_effective;
  std::vector<double> u_true;       // complete-information U*
  std::vector<double> u_effective;  // what departments compute
  std::vector<double> v;            // candidate utilities
  std::vector<std::vector<int>> signals;  // aea: per-candidate signaled departments
  std::vector<std::vector<int>> interview_lists;
  MatchingOutcome outcome;
  std::vector<OfferRecord> records;
  std::vector<DepartmentDiagnostics> diagnostics;

  double at(const std::vector<double>& mat, int j, int i) const {
    return mat[static_cast<std::size_t>(j) * cohort.size() + static_cast<std::size_t>(i)];
  }
};

struct YearInputs {
  int year = 0;
  std::vector<bool> active;
  std::vector<CandidateProfile> cohort;  // raw draw, signaling not yet applied
  std::vector<int> participation_order;
};

YearInputs draw_year_inputs(const Market& market, int replication, Phase phase, int year);

/// One hiring cycle: signaling, pools, utilities, ranking, interviews, first
/// round and scramble. The deferred-acceptance arm replaces the interview and
/// offer stages by a centralized match and records no offers.
YearSnapshot simulate_year(const Market& market, const MechanismSpec& mechanism, YearInputs inputs,
                           const Ranker& ranker, bool keep_diagnostics = false);

LearnerSpec learner_spec_for(const MarketConfig& cfg, const MechanismSpec& mechanism);

/// burn_in_years cycles without disclosure under plug-in ranking; the model
/// is refit once per year, starting from the cold-start constant.
HistoryDataset run_burn_in(const Market& market, int replication);

using YearObserver = std::function<void(const YearSnapshot&)>;

/// Horizon years after a burn-in: refit the bootstrap ensemble on all history
/// to date, then simulate. `history` grows in place.
void run_horizon(const Market& market, const MechanismSpec& mechanism, int replication,
                 HistoryDataset& history, const YearObserver& observe,
                 bool keep_diagnostics = false);

}  // namespace jobmarket
