#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "jobmarket/market.hpp"

namespace jobmarket {

/// Realized candidate welfare: V of the accepted match, 0 when unmatched.
std::vector<double> candidate_welfare(const YearSnapshot& snap);

struct FillRates {
  double matching_rate = 0.0;
  double first_round = 0.0;  // shares of active positions
  double scramble = 0.0;
  double unfilled = 0.0;
  int positions = 0;
};

/// Candidate matching rate and the fill decomposition of active positions;
/// `tier` > 0 restricts positions to that department tier.
FillRates matching_and_fill_rates(const YearSnapshot& snap, int tier = 0);

/// Sum of U* over hires divided by active positions, per department tier
/// (index 0 holds all tiers). NaN for tiers with no active department.
std::vector<double> department_welfare(const YearSnapshot& snap);

struct Heatmap {
  int tiers = 0;
  std::vector<double> count;  // dept tier major: (t - 1) * tiers + (u - 1)
  std::vector<double> u_sum;  // sum of U* over those hires

  double mean_u(int dept_tier, int cand_tier) const;
};

Heatmap hiring_heatmap(const YearSnapshot& snap);

/// Blocking pairs among pool-eligible pairs of active departments, judged by
/// complete-information U* and V.
BlockingCount blocking_pairs(const YearSnapshot& snap);

struct MetricRow {
  int replication = 0;
  int year = 0;
  std::string mechanism;
  double rho = 0.0;
  std::string metric;
  std::string stratum;
  double value = 0.0;
};

/// Every per-year metric as tidy rows; undefined cells (empty strata) are
/// omitted.
std::vector<MetricRow> year_metric_rows(const YearSnapshot& snap, int replication);

/// Header: replication,year,mechanism,rho,metric,stratum,value
void write_metric_header(std::ostream& out);
void write_metric_rows(std::ostream& out, std::span<const MetricRow> rows);

struct SummaryKey {
  std::string mechanism;
  double rho = 0.0;
  std::string metric;
  std::string stratum;
  auto operator<=>(const SummaryKey&) const = default;
};

struct SummaryStat {
  double mean = 0.0;  // across replications
  double se = 0.0;    // standard error across replications
  int replications = 0;
  std::vector<double> per_replication;
};

/// Per replication, metrics are averaged over years (counts summed over
/// years); those per-replication values are then averaged.
std::map<SummaryKey, SummaryStat> summarize(std::span<const MetricRow> rows);

/// True for metrics aggregated by summing over years.
bool summed_over_years(const std::string& metric);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, t approximation
  std::size_t n = 0;
};

/// Rank correlation with average ranks for ties.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

}  // namespace jobmarket
