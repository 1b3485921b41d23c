#include "jobmarket/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jobmarket/error.hpp"
#include "jobmarket/offers.hpp"
#include "jobmarket/ranking.hpp"
#include "jobmarket/rng.hpp"
#include "jobmarket/utility.hpp"

namespace jobmarket {

std::string mechanism_name(MechanismSpec::Kind kind) {
  switch (kind) {
    case MechanismSpec::Kind::questionnaire: return "questionnaire";
    case MechanismSpec::Kind::baseline: return "baseline";
    case MechanismSpec::Kind::aea: return "aea";
    case MechanismSpec::Kind::deferred_acceptance: return "da";
  }
  return "unknown";
}

std::string MechanismSpec::name() const { return mechanism_name(kind); }

MechanismSpec::Kind parse_mechanism(const std::string& name) {
  if (name == "questionnaire") return MechanismSpec::Kind::questionnaire;
  if (name == "baseline") return MechanismSpec::Kind::baseline;
  if (name == "aea") return MechanismSpec::Kind::aea;
  if (name == "da") return MechanismSpec::Kind::deferred_acceptance;
  throw ConfigError("unknown mechanism '" + name + "' (expected questionnaire|baseline|aea|da)");
}

int participant_count(double rho, int n) {
  // The epsilon keeps products such as 0.05 * 300 from rounding down.
  return std::clamp(static_cast<int>(std::floor(rho * n + 1e-9)), 0, n);
}

void apply_signaling(std::vector<CandidateProfile>& cohort, const MechanismSpec& spec,
                     std::span<const int> participation_order, int departments) {
  for (auto& c : cohort) {
    c.participates = false;
    c.disclosure_set.clear();
    c.reported_prefs = c.true_prefs;
  }
  const int n = static_cast<int>(cohort.size());
  const int k = participant_count(spec.effective_rho(), n);
  if (static_cast<int>(participation_order.size()) < k) {
    throw std::invalid_argument("apply_signaling: participation order shorter than the cohort");
  }
  std::vector<int> everyone(static_cast<std::size_t>(departments));
  std::iota(everyone.begin(), everyone.end(), 0);
  for (int r = 0; r < k; ++r) {
    auto& c = cohort[static_cast<std::size_t>(participation_order[static_cast<std::size_t>(r)])];
    c.participates = true;
    c.disclosure_set = everyone;
  }
  if (!spec.truthful && spec.misreport_strategy) {
    for (int i : spec.misreporters) spec.misreport_strategy(cohort[static_cast<std::size_t>(i)]);
  }
}

std::vector<std::vector<int>> aea_signal_assignment(std::span<const double> v, int departments,
                                                    int candidates, std::span<const int> eligible,
                                                    int count) {
  if (count < 1) throw std::invalid_argument("aea_signal_assignment: signal count must be >= 1");
  const auto n = static_cast<std::size_t>(candidates);
  if (v.size() != static_cast<std::size_t>(departments) * n) {
    throw std::invalid_argument("aea_signal_assignment: V must be departments x candidates");
  }
  std::vector<std::vector<int>> out(n);
  std::vector<int> order(eligible.begin(), eligible.end());
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(count), order.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](int a, int b) {
                        const double va = v[static_cast<std::size_t>(a) * n + i];
                        const double vb = v[static_cast<std::size_t>(b) * n + i];
                        if (va != vb) return va > vb;
                        return a < b;
                      });
    out[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

std::vector<int> deferred_acceptance(const std::vector<std::vector<int>>& candidate_prefs,
                                     const std::vector<std::vector<int>>& department_prefs) {
  const std::size_t n = candidate_prefs.size();
  const std::size_t m = department_prefs.size();
  // rank[j][i]: position of i in j's list, or n when unacceptable.
  std::vector<std::vector<std::size_t>> rank(m, std::vector<std::size_t>(n, n));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t r = 0; r < department_prefs[j].size(); ++r) {
      rank[j][static_cast<std::size_t>(department_prefs[j][r])] = r;
    }
  }
  std::vector<int> match(n, -1);
  std::vector<int> held(m, -1);
  std::vector<std::size_t> next(n, 0);
  std::vector<int> free_list;
  for (std::size_t i = n; i-- > 0;) free_list.push_back(static_cast<int>(i));
  while (!free_list.empty()) {
    const auto i = static_cast<std::size_t>(free_list.back());
    free_list.pop_back();
    while (next[i] < candidate_prefs[i].size()) {
      const auto j = static_cast<std::size_t>(candidate_prefs[i][next[i]++]);
      if (rank[j][i] >= n) continue;
      const int cur = held[j];
      if (cur < 0) {
        held[j] = static_cast<int>(i);
        match[i] = static_cast<int>(j);
        break;
      }
      if (rank[j][i] < rank[j][static_cast<std::size_t>(cur)]) {
        held[j] = static_cast<int>(i);
        match[i] = static_cast<int>(j);
        match[static_cast<std::size_t>(cur)] = -1;
        free_list.push_back(cur);
        break;
      }
    }
  }
  return match;
}

BlockingCount count_blocking_pairs(std::span<const int> dept_of_candidate,
                                   std::span<const int> hire_of_department,
                                   const std::vector<std::vector<int>>& eligible,
                                   std::span<const double> u_dept, std::span<const double> v_cand,
                                   int candidates) {
  const auto n = static_cast<std::size_t>(candidates);
  BlockingCount out;
  for (std::size_t j = 0; j < eligible.size(); ++j) {
    const int hire = hire_of_department[j];
    for (int i : eligible[j]) {
      const auto ii = static_cast<std::size_t>(i);
      ++out.eligible;
      const int match = dept_of_candidate[ii];
      if (match == static_cast<int>(j)) continue;
      const bool dept_prefers =
          hire < 0 || u_dept[j * n + ii] > u_dept[j * n + static_cast<std::size_t>(hire)];
      if (!dept_prefers) continue;
      const bool cand_prefers =
          match < 0 || v_cand[j * n + ii] > v_cand[static_cast<std::size_t>(match) * n + ii];
      if (cand_prefers) ++out.count;
    }
  }
  return out;
}

std::vector<Misreport> default_misreport_grid(std::span<const double> true_prefs, int random_draws,
                                              std::uint64_t seed) {
  const std::vector<double> truth(true_prefs.begin(), true_prefs.end());
  auto blend = [&](double t) {
    std::vector<double> q(truth.size());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = (1.0 - t) * truth[k] + t * 0.5;
    return q;
  };
  std::vector<Misreport> grid{{"truth", truth},
                              {"blend_25", blend(0.25)},
                              {"blend_50", blend(0.5)},
                              {"center", blend(1.0)}};
  std::vector<double> reflected(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) reflected[k] = 1.0 - truth[k];
  grid.push_back({"reflection", reflected});
  Rng rng(derive_seed(seed, Stream::misreport));
  for (int r = 0; r < random_draws; ++r) {
    std::vector<double> q(truth.size());
    for (auto& x : q) x = rng.uniform();
    grid.push_back({"random_" + std::to_string(r), std::move(q)});
  }
  return grid;
}

MisreportProbeResult misreport_gain_probe(const CloneInstance& inst, std::span<const Misreport> grid) {
  if (inst.clones < 1 || inst.slots < 1 || inst.simulations < 2) {
    throw std::invalid_argument("misreport_gain_probe: needs clones >= 1, slots >= 1, simulations >= 2");
  }
  const auto items = static_cast<std::size_t>(inst.items);
  std::vector<double> truth = inst.true_prefs;
  Rng rng(derive_seed(inst.seed, Stream::probe));
  if (truth.empty()) {
    truth.resize(items);
    for (auto& x : truth) x = rng.uniform();
  }
  if (truth.size() != items) throw std::invalid_argument("misreport_gain_probe: q* has the wrong length");
  for (const auto& g : grid) {
    if (g.report.size() != items) throw std::invalid_argument("misreport_gain_probe: report has the wrong length");
  }

  const AlignmentParams params = AlignmentParams::uniform(items);
  const auto nc = static_cast<std::size_t>(inst.clones);
  const std::size_t G = grid.size();
  std::vector<double> sum(G, 0.0), sum_sq(G, 0.0);
  double truthful_sum = 0.0;
  std::vector<double> d(items), others((nc - 1) * items), f(nc), v(nc);
  std::vector<int> ids(nc);
  std::iota(ids.begin(), ids.end(), 0);
  const std::vector<bool> active{true};

  for (int s = 0; s < inst.simulations; ++s) {
    for (auto& x : d) x = rng.uniform();
    for (auto& x : others) x = rng.uniform();
    for (std::size_t o = 1; o < nc; ++o) {
      f[o] = alignment_score(std::span<const double>(others.data() + (o - 1) * items, items), d, params);
      v[o] = candidate_utility(inst.prestige, f[o], inst.beta);
    }
    const double v_true = candidate_utility(inst.prestige, alignment_score(truth, d, params), inst.beta);
    v[0] = v_true;
    auto payoff_of = [&](std::span<const double> report) {
      f[0] = alignment_score(report, d, params);
      // Clones share quality, so expected utility orders by alignment alone.
      const std::vector<std::vector<int>> lists{plugin_top_k(ids, f, inst.slots)};
      const MatchingOutcome out = run_offer_rounds(lists, active, v, inst.clones);
      double w = 0.0;
      for (const auto& e : out.offers) {
        if (e.cand == 0) w += v_true;
      }
      return w;
    };
    const double base = payoff_of(truth);
    truthful_sum += base;
    for (std::size_t g = 0; g < G; ++g) {
      const double diff = payoff_of(grid[g].report) - base;
      sum[g] += diff;
      sum_sq[g] += diff * diff;
    }
  }

  MisreportProbeResult r;
  const double S = inst.simulations;
  r.bound = static_cast<double>(inst.slots) / static_cast<double>(inst.clones);
  r.truthful_payoff = truthful_sum / S;
  for (std::size_t g = 0; g < G; ++g) {
    const double mean = sum[g] / S;
    const double var = std::max(0.0, (sum_sq[g] - S * mean * mean) / (S - 1.0));
    r.labels.push_back(grid[g].label);
    r.gain.push_back(mean);
    r.gain_se.push_back(std::sqrt(var / S));
    if (mean > r.gain[r.best]) r.best = g;
  }
  return r;
}

}  // namespace jobmarket
