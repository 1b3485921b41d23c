// Desk-scale acceptance run: prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Aggregates are recomputed here from
// the raw metric rows rather than read from summarize().

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "jobmarket/acceptance.hpp"
#include "jobmarket/dataset.hpp"
#include "jobmarket/mechanisms.hpp"
#include "jobmarket/metrics.hpp"
#include "jobmarket/probes.hpp"
#include "jobmarket/ranking.hpp"
#include "jobmarket/rng.hpp"
#include "jobmarket/sweep.hpp"
#include "jobmarket/validation.hpp"

using namespace jobmarket;

namespace {

int failures = 0;
// Criterion lines are printed in numeric order once everything has run.
std::map<int, std::string> verdicts;

void verdict(int criterion, bool pass, const std::string& detail) {
  verdicts[criterion] = std::string(pass ? "PASS" : "FAIL") + " criterion " + std::to_string(criterion) + ": " + detail;
  std::printf("info criterion %d evaluated\n", criterion);
  std::fflush(stdout);
  failures += !pass;
}

void note(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s check %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string num(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// (rho, metric, stratum) -> replication -> values over years.
using Cells = std::map<std::tuple<double, std::string, std::string>, std::map<int, std::vector<double>>>;

Cells collect(const std::vector<MetricRow>& rows) {
  Cells cells;
  for (const auto& r : rows) cells[{r.rho, r.metric, r.stratum}][r.replication].push_back(r.value);
  return cells;
}

// Mean over years within each replication.
std::vector<double> per_rep(const Cells& cells, double rho, const std::string& metric, const std::string& stratum) {
  std::vector<double> out;
  const auto it = cells.find({rho, metric, stratum});
  if (it == cells.end()) return out;
  for (const auto& [rep, values] : it->second) {
    out.push_back(std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size()));
  }
  return out;
}

double mean(const std::vector<double>& x) {
  return x.empty() ? std::nan("") : std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double grand(const Cells& cells, double rho, const std::string& metric, const std::string& stratum) {
  return mean(per_rep(cells, rho, metric, stratum));
}

void coverage_criteria() {
  CoverageConfig cfg;  // pool 30, k 5, 500 trials, alpha 0.1
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_coverage_suite(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  verdict(1, r.rank_coverage() >= 0.88 && secs < 60.0,
          "joint rank coverage " + num(r.rank_coverage()) + " >= 0.88 over " + std::to_string(r.trials) +
              " trials in " + num(secs, 3) + " s");
  verdict(2, r.top_k_coverage() >= 0.88,
          "top-5 inclusion " + num(r.top_k_coverage()) + " >= 0.88 over " + std::to_string(r.trials) + " trials");
  const auto red = run_degenerate_reduction(1000, 31);
  verdict(3, red.instances == 1000 && red.mismatches == 0,
          std::to_string(red.mismatches) + " mismatches against brute-force top-k in " +
              std::to_string(red.instances) + " zero-variance instances");
  const auto da = run_da_stability(5, 200, 37);
  verdict(4, da.instances > 0 && da.unstable == 0,
          std::to_string(da.unstable) + " unstable outcomes in " + std::to_string(da.instances) +
              " deferred-acceptance instances (n, m <= 5, 200 profiles each)");
}

void market_criteria() {
  RunOptions options;
  options.market.replications = 20;
  options.market.B = 50;
  const Market market = build_market(options);
  const auto grid = default_rho_grid();
  const auto arms = questionnaire_arms(grid);
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = execute_in_memory(market, arms, options.market.replications);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("info desk-scale sweep: %zu arms x %d replications x %d years in %.0f s\n", arms.size(),
              options.market.replications, options.market.years, secs);
  const auto cells = collect(run.rows);

  // Criterion 5.
  bool dominant = true;
  std::string detail;
  for (double rho : {0.05, 0.2, 0.5, 0.9}) {
    const double p = grand(cells, rho, "candidate_welfare_mean", "participant");
    const double np = grand(cells, rho, "candidate_welfare_mean", "nonparticipant");
    dominant = dominant && p > np;
    detail += "rho " + num(rho, 2) + ": " + num(p) + " vs " + num(np) + "; ";
  }
  const double ratio05 = grand(cells, 0.05, "candidate_welfare_mean", "participant") /
                         grand(cells, 0.05, "candidate_welfare_mean", "nonparticipant");
  verdict(5, dominant && ratio05 >= 3.0, detail + "ratio at 0.05 = " + num(ratio05) + " >= 3");

  // Criterion 6.
  const double rate0 = grand(cells, 0.0, "matching_rate", "all");
  const double rate1 = grand(cells, 1.0, "matching_rate", "all");
  const double welfare_ratio =
      grand(cells, 1.0, "candidate_welfare_total", "all") / grand(cells, 0.0, "candidate_welfare_total", "all");
  verdict(6, rate1 >= 1.25 * rate0 && rate0 >= 0.05 && rate0 <= 0.12 && welfare_ratio >= 1.3 && welfare_ratio <= 2.2,
          "matching rate " + num(rate0) + " -> " + num(rate1) + " (relative gain " + num(rate1 / rate0 - 1.0) +
              " >= 0.25, base in [0.05, 0.12]); welfare ratio " + num(welfare_ratio) + " in [1.3, 2.2]");

  // Criterion 7.
  const double unfilled0 = grand(cells, 0.0, "share_unfilled", "all");
  const double unfilled1 = grand(cells, 1.0, "share_unfilled", "all");
  int best_tier = 0;
  double best_gain = -1e9;
  std::string gains;
  for (int t = 1; t <= options.market.tiers(); ++t) {
    const std::string s = "tier" + std::to_string(t);
    const double w0 = grand(cells, 0.0, "dept_welfare_per_position", s);
    const double w1 = grand(cells, 1.0, "dept_welfare_per_position", s);
    const double g = w1 / w0 - 1.0;
    gains += s + " " + num(w0, 3) + "->" + num(w1, 3) + "; ";
    if (g > best_gain) {
      best_gain = g;
      best_tier = t;
    }
  }
  verdict(7, unfilled0 >= 0.50 && unfilled0 <= 0.72 && unfilled0 - unfilled1 >= 0.12 && (best_tier == 3 || best_tier == 4),
          "unfilled " + num(unfilled0) + " in [0.50, 0.72] -> " + num(unfilled1) + " (drop " +
              num(100.0 * (unfilled0 - unfilled1), 3) + " pp >= 12); largest relative welfare gain in tier " +
              std::to_string(best_tier) + " (" + gains + ")");

  // Criterion 8.
  std::vector<double> x, y;
  for (double rho : grid) {
    for (double v : per_rep(cells, rho, "blocking_rate", "all")) {
      x.push_back(rho);
      y.push_back(v);
    }
  }
  const auto sp = spearman(x, y);
  const double block0 = grand(cells, 0.0, "blocking_rate", "all");
  const double block1 = grand(cells, 1.0, "blocking_rate", "all");
  verdict(8, sp.rho < 0.0 && sp.p_value < 0.05 && block0 - block1 >= 0.05,
          "Spearman " + num(sp.rho) + " (p " + num(sp.p_value, 3) + ", n " + std::to_string(sp.n) +
              "); blocking rate " + num(block0) + " -> " + num(block1));

  // Paired-seed hires: more total hires at full participation in >= 95% of replications.
  const auto h0 = per_rep(cells, 0.0, "hires", "all");
  const auto h1 = per_rep(cells, 1.0, "hires", "all");
  int more = 0;
  for (std::size_t r = 0; r < std::min(h0.size(), h1.size()); ++r) more += h1[r] > h0[r];
  note("paired_hires", !h0.empty() && more >= 0.95 * static_cast<double>(h0.size()),
       std::to_string(more) + " of " + std::to_string(h0.size()) + " replications hire more at rho 1");

  // Participant nesting (second half of criterion 11), exact over every year.
  bool nested = true;
  std::size_t checked = 0;
  for (const auto& rep : run.replications) {
    for (std::size_t a = 0; a + 1 < rep.participants.size(); ++a) {
      for (std::size_t yr = 0; yr < rep.participants[a].size(); ++yr) {
        const auto& lo = rep.participants[a][yr];
        const auto& hi = rep.participants[a + 1][yr];
        nested = nested && std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()) &&
                 lo.size() == static_cast<std::size_t>(participant_count(grid[a], market.n()));
        ++checked;
      }
    }
  }

  // Byte-identical metrics CSV for identical config and seed.
  namespace fs = std::filesystem;
  RunOptions small = options;
  small.market.replications = 2;
  small.market.years = 3;
  const auto base = fs::temp_directory_path() / "jobmarket_acceptance_determinism";
  fs::remove_all(base);
  auto csv_of = [&](const std::string& tag) {
    const RunLayout layout{base / tag};
    const Market m = build_market(small);
    execute_run(m, {"acceptance", small, questionnaire_arms(grid), grid}, layout);
    std::ifstream f(layout.metrics(), std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  };
  const std::string a = csv_of("a"), b = csv_of("b");
  fs::remove_all(base);
  verdict(11, nested && !a.empty() && a == b,
          std::string("metrics CSV ") + (a == b ? "byte-identical" : "differs") + " (" + std::to_string(a.size()) +
              " bytes); participant sets nested in " + std::to_string(checked) + " adjacent-rate comparisons" +
              (nested ? "" : " with violations"));
}

void probe_criteria() {
  std::vector<double> gains;
  bool bounded = true;
  std::string detail;
  for (int clones : {25, 100}) {
    CloneInstance inst;
    inst.clones = clones;
    inst.slots = 5;
    inst.items = 15;
    inst.simulations = 4000;
    inst.seed = 700 + static_cast<std::uint64_t>(clones);
    Rng rng(inst.seed);
    inst.true_prefs.resize(15);
    for (auto& q : inst.true_prefs) q = rng.uniform();
    const auto grid = default_misreport_grid(inst.true_prefs, 8, inst.seed + 1);
    const auto r = misreport_gain_probe(inst, grid);
    bounded = bounded && r.max_gain() <= r.bound + 3.0 * r.max_gain_se();
    gains.push_back(r.max_gain());
    detail += "n_c " + std::to_string(clones) + ": max gain " + num(r.max_gain()) + " (" + r.labels[r.best] +
              ", se " + num(r.max_gain_se(), 2) + ") vs K/n_c " + num(r.bound) + "; ";
  }
  verdict(9, bounded && gains[1] < gains[0], detail + "gain shrinks with n_c");

  InformativenessInstance info;  // dims {3, 7, 15}
  info.simulations = 4000;
  const auto ir = dept_informativeness_probe(info);
  bool monotone = true;
  detail.clear();
  for (std::size_t s = 0; s < ir.step_gain.size(); ++s) {
    monotone = monotone && ir.step_gain[s] >= -2.0 * ir.step_se[s];
    detail += "W(" + std::to_string(ir.dims[s]) + ")=" + num(ir.welfare[s]) + " ";
  }
  detail += "W(" + std::to_string(ir.dims.back()) + ")=" + num(ir.welfare.back());
  verdict(10, monotone, detail + "; each step >= -2 se");
}

void estimator_identities() {
  Rng rng(1201);
  double worst_mean = 0.0, worst_sd = 0.0;
  for (int fixture = 0; fixture < 20; ++fixture) {
    HistoryDataset h;
    const int rows = 80 + static_cast<int>(rng.below(200));
    for (int i = 0; i < rows; ++i) {
      OfferRecord r;
      r.offered = true;
      r.prestige = rng.uniform();
      r.vbar = rng.uniform();
      r.alignment = 0.5 + 0.5 * rng.uniform();
      r.accepted = rng.bernoulli(0.2 + 0.5 * r.alignment * r.prestige);
      h.records.push_back(r);
    }
    const int B = 10 + static_cast<int>(rng.below(40));
    const auto ens = bootstrap_ensemble(h, B, LearnerSpec{}, rng.next());
    const int pool = 6;
    std::vector<AcceptanceFeatures> x(pool);
    std::vector<double> u(pool);
    for (int i = 0; i < pool; ++i) {
      x[static_cast<std::size_t>(i)] = {rng.uniform(), rng.uniform(), 0.5 + 0.5 * rng.uniform(), false};
      u[static_cast<std::size_t>(i)] = rng.uniform();
    }
    std::vector<double> draws(static_cast<std::size_t>(B));
    for (const auto& xi : x) {
      ens.draws(xi, draws);
      const double m = std::accumulate(draws.begin(), draws.end(), 0.0) / B;
      worst_mean = std::max(worst_mean, std::abs(ens.estimate(xi) - m));
    }
    const auto eu = predict_expected_utilities(ens, x, u);
    const auto stats = pairwise_stats(eu);
    for (int i = 0; i < pool; ++i) {
      for (int l = 0; l < pool; ++l) {
        if (i == l) continue;
        std::vector<double> d(static_cast<std::size_t>(B));
        for (int b = 0; b < B; ++b) {
          d[static_cast<std::size_t>(b)] = eu.draw(static_cast<std::size_t>(i), static_cast<std::size_t>(b)) -
                                           eu.draw(static_cast<std::size_t>(l), static_cast<std::size_t>(b));
        }
        const double dm = std::accumulate(d.begin(), d.end(), 0.0) / B;
        double ss = 0.0;
        for (double v : d) ss += (v - dm) * (v - dm);
        worst_sd = std::max(worst_sd, std::abs(stats.sigma(static_cast<std::size_t>(i), static_cast<std::size_t>(l)) -
                                               std::sqrt(ss / (B - 1))));
      }
    }
  }
  verdict(12, worst_mean <= 1e-12 && worst_sd <= 1e-12,
          "max |pi_hat - mean(draws)| = " + num(worst_mean, 3) + ", max |sigma_hat - sd_(B-1)| = " + num(worst_sd, 3) +
              " over 20 randomized fixtures (tolerance 1e-12)");
}

}  // namespace

int main() {
  coverage_criteria();
  market_criteria();
  probe_criteria();
  estimator_identities();
  for (const auto& [criterion, line] : verdicts) std::printf("%s\n", line.c_str());
  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
