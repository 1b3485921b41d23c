#include "jobmarket/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "csv_util.hpp"

namespace jobmarket {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string tier_label(int t) { return "tier" + std::to_string(t); }

int tier_count(const YearSnapshot& snap) {
  int t = 1;
  for (int x : snap.department_tier) t = std::max(t, x);
  for (int x : snap.candidate_tier) t = std::max(t, x);
  return t;
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

std::vector<double> candidate_welfare(const YearSnapshot& snap) {
  const std::size_t n = snap.cohort.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = snap.outcome.dept_of_candidate[i];
    if (j >= 0) w[i] = snap.at(snap.v, j, static_cast<int>(i));
  }
  return w;
}

FillRates matching_and_fill_rates(const YearSnapshot& snap, int tier) {
  FillRates r;
  const auto& out = snap.outcome;
  if (!snap.cohort.empty()) {
    r.matching_rate = static_cast<double>(out.hires()) / static_cast<double>(snap.cohort.size());
  }
  int first = 0, scramble = 0, unfilled = 0;
  for (std::size_t j = 0; j < snap.active.size(); ++j) {
    if (!snap.active[j]) continue;
    if (tier > 0 && snap.department_tier[j] != tier) continue;
    const int round = out.fill_round[j];
    if (round == 0) {
      ++first;
    } else if (round > 0) {
      ++scramble;
    } else {
      ++unfilled;
    }
  }
  r.positions = first + scramble + unfilled;
  if (r.positions > 0) {
    const double p = r.positions;
    r.first_round = first / p;
    r.scramble = scramble / p;
    r.unfilled = unfilled / p;
  } else {
    r.first_round = r.scramble = r.unfilled = kNaN;
  }
  return r;
}

std::vector<double> department_welfare(const YearSnapshot& snap) {
  const int T = tier_count(snap);
  std::vector<double> sum(static_cast<std::size_t>(T) + 1, 0.0);
  std::vector<int> positions(static_cast<std::size_t>(T) + 1, 0);
  for (std::size_t j = 0; j < snap.active.size(); ++j) {
    if (!snap.active[j]) continue;
    const auto t = static_cast<std::size_t>(snap.department_tier[j]);
    const int hire = snap.outcome.hire_of_department[j];
    const double u = hire >= 0 ? snap.at(snap.u_true, static_cast<int>(j), hire) : 0.0;
    sum[t] += u;
    sum[0] += u;
    ++positions[t];
    ++positions[0];
  }
  std::vector<double> out(sum.size());
  for (std::size_t t = 0; t < sum.size(); ++t) {
    out[t] = positions[t] > 0 ? sum[t] / positions[t] : kNaN;
  }
  return out;
}

double Heatmap::mean_u(int dept_tier, int cand_tier) const {
  const auto e = static_cast<std::size_t>((dept_tier - 1) * tiers + (cand_tier - 1));
  return count[e] > 0.0 ? u_sum[e] / count[e] : kNaN;
}

Heatmap hiring_heatmap(const YearSnapshot& snap) {
  Heatmap h;
  h.tiers = tier_count(snap);
  const auto cells = static_cast<std::size_t>(h.tiers * h.tiers);
  h.count.assign(cells, 0.0);
  h.u_sum.assign(cells, 0.0);
  for (std::size_t j = 0; j < snap.active.size(); ++j) {
    const int hire = snap.outcome.hire_of_department[j];
    if (hire < 0) continue;
    const auto e = static_cast<std::size_t>((snap.department_tier[j] - 1) * h.tiers +
                                            (snap.candidate_tier[static_cast<std::size_t>(hire)] - 1));
    h.count[e] += 1.0;
    h.u_sum[e] += snap.at(snap.u_true, static_cast<int>(j), hire);
  }
  return h;
}

BlockingCount blocking_pairs(const YearSnapshot& snap) {
  return count_blocking_pairs(snap.outcome.dept_of_candidate, snap.outcome.hire_of_department,
                              snap.pools, snap.u_true, snap.v, static_cast<int>(snap.cohort.size()));
}

std::vector<MetricRow> year_metric_rows(const YearSnapshot& snap, int replication) {
  std::vector<MetricRow> rows;
  const std::string mech = mechanism_name(snap.mechanism);
  auto emit = [&](const std::string& metric, const std::string& stratum, double value) {
    if (std::isnan(value)) return;
    rows.push_back({replication, snap.year, mech, snap.rho, metric, stratum, value});
  };
  const int T = tier_count(snap);
  const std::size_t n = snap.cohort.size();
  const std::vector<double> welfare = candidate_welfare(snap);

  // Candidate side, split by participation status and by candidate tier.
  double w_all = 0.0, w_part = 0.0, w_non = 0.0;
  int n_part = 0, m_all = 0, m_part = 0, m_non = 0;
  std::vector<int> tier_size(static_cast<std::size_t>(T) + 1, 0), tier_matched(tier_size);
  std::vector<double> tier_v(static_cast<std::size_t>(T) + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool matched = snap.outcome.dept_of_candidate[i] >= 0;
    const bool part = snap.cohort[i].participates;
    const auto t = static_cast<std::size_t>(snap.candidate_tier[i]);
    w_all += welfare[i];
    m_all += matched;
    ++tier_size[t];
    if (matched) {
      ++tier_matched[t];
      tier_v[t] += welfare[i];
    }
    if (part) {
      ++n_part;
      w_part += welfare[i];
      m_part += matched;
    } else {
      w_non += welfare[i];
      m_non += matched;
    }
  }
  const int n_non = static_cast<int>(n) - n_part;
  auto ratio = [](double a, int b) { return b > 0 ? a / b : kNaN; };

  emit("participants", "all", n_part);
  emit("matching_rate", "all", ratio(m_all, static_cast<int>(n)));
  emit("matching_rate", "participant", ratio(m_part, n_part));
  emit("matching_rate", "nonparticipant", ratio(m_non, n_non));
  for (int t = 1; t <= T; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    emit("matching_rate", tier_label(t), ratio(tier_matched[ts], tier_size[ts]));
  }
  emit("candidate_welfare_total", "all", w_all);
  emit("candidate_welfare_total", "participant", n_part > 0 ? w_part : kNaN);
  emit("candidate_welfare_total", "nonparticipant", n_non > 0 ? w_non : kNaN);
  emit("candidate_welfare_mean", "all", ratio(w_all, static_cast<int>(n)));
  emit("candidate_welfare_mean", "participant", ratio(w_part, n_part));
  emit("candidate_welfare_mean", "nonparticipant", ratio(w_non, n_non));
  for (int t = 1; t <= T; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    emit("matched_v_mean", tier_label(t), ratio(tier_v[ts], tier_matched[ts]));
  }

  // Department side.
  for (int t = 0; t <= T; ++t) {
    const FillRates fr = matching_and_fill_rates(snap, t);
    const std::string stratum = t == 0 ? "all" : tier_label(t);
    emit("share_first_round", stratum, fr.first_round);
    emit("share_scramble", stratum, fr.scramble);
    emit("share_unfilled", stratum, fr.unfilled);
    if (t == 0) emit("active_positions", "all", fr.positions);
  }
  const std::vector<double> dw = department_welfare(snap);
  for (int t = 0; t <= T; ++t) {
    emit("dept_welfare_per_position", t == 0 ? "all" : tier_label(t), dw[static_cast<std::size_t>(t)]);
  }
  emit("hires", "all", snap.outcome.hires());

  const Heatmap h = hiring_heatmap(snap);
  for (int t = 1; t <= T; ++t) {
    for (int u = 1; u <= T; ++u) {
      const std::string cell = "dept_tier" + std::to_string(t) + "_cand_tier" + std::to_string(u);
      emit("heatmap_count", cell, h.count[static_cast<std::size_t>((t - 1) * T + (u - 1))]);
      emit("heatmap_mean_u", cell, h.mean_u(t, u));
    }
  }

  const BlockingCount bc = blocking_pairs(snap);
  emit("blocking_pairs", "all", static_cast<double>(bc.count));
  emit("blocking_rate", "all", bc.eligible > 0 ? bc.rate() : kNaN);
  return rows;
}

void write_metric_header(std::ostream& out) {
  out << "replication,year,mechanism,rho,metric,stratum,value\n";
}

void write_metric_rows(std::ostream& out, std::span<const MetricRow> rows) {
  for (const auto& r : rows) {
    out << r.replication << ',' << r.year << ',' << r.mechanism << ',' << detail::format_double(r.rho)
        << ',' << r.metric << ',' << r.stratum << ',' << detail::format_double(r.value) << '\n';
  }
}

bool summed_over_years(const std::string& metric) { return metric == "heatmap_count"; }

std::map<SummaryKey, SummaryStat> summarize(std::span<const MetricRow> rows) {
  struct Acc {
    double sum = 0.0;
    int years = 0;
  };
  std::map<SummaryKey, std::map<int, Acc>> per_rep;
  for (const auto& r : rows) {
    Acc& a = per_rep[{r.mechanism, r.rho, r.metric, r.stratum}][r.replication];
    a.sum += r.value;
    ++a.years;
  }
  std::map<SummaryKey, SummaryStat> out;
  for (const auto& [key, reps] : per_rep) {
    SummaryStat s;
    const bool sum = summed_over_years(key.metric);
    for (const auto& [rep, a] : reps) s.per_replication.push_back(sum ? a.sum : a.sum / a.years);
    s.replications = static_cast<int>(s.per_replication.size());
    const double k = s.replications;
    s.mean = std::accumulate(s.per_replication.begin(), s.per_replication.end(), 0.0) / k;
    if (s.replications > 1) {
      double ss = 0.0;
      for (double x : s.per_replication) ss += (x - s.mean) * (x - s.mean);
      s.se = std::sqrt(ss / (k - 1.0) / k);
    }
    out.emplace(key, std::move(s));
  }
  return out;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: samples differ in length");
  SpearmanResult r;
  r.n = x.size();
  if (r.n < 3) return r;
  const std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  const double mean = (static_cast<double>(r.n) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return r;
  r.rho = sxy / std::sqrt(sxx * syy);
  const double df = static_cast<double>(r.n) - 2.0;
  if (std::abs(r.rho) >= 1.0) {
    r.p_value = 0.0;
    return r;
  }
  const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
  const boost::math::students_t dist(df);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return r;
}

}  // namespace jobmarket
