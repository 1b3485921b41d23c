#include "jobmarket/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "jobmarket/error.hpp"
#include "jobmarket/ranking.hpp"
#include "jobmarket/rng.hpp"
#include "jobmarket/utility.hpp"

namespace jobmarket {

Market::Market(MarketConfig cfg, std::vector<DepartmentProfile> depts)
    : config(std::move(cfg)), departments(std::move(depts)) {
  config.validate();
  if (departments.empty()) throw ConfigError("market needs at least one department");
  for (std::size_t j = 0; j < departments.size(); ++j) {
    auto& d = departments[j];
    d.id = static_cast<int>(j);
    if (d.attributes.size() != static_cast<std::size_t>(config.p_d)) {
      throw ConfigError("department " + std::to_string(j) + " has " +
                        std::to_string(d.attributes.size()) + " attributes, p_d is " +
                        std::to_string(config.p_d));
    }
    if (d.utility_weights.empty()) {
      d.utility_weights.assign(static_cast<std::size_t>(config.p_v), 1.0 / config.p_v);
    }
    if (d.utility_weights.size() != static_cast<std::size_t>(config.p_v)) {
      throw ConfigError("department " + std::to_string(j) + " utility weights do not match p_v");
    }
    if (d.capacity < 1) throw ConfigError("department " + std::to_string(j) + " capacity must be >= 1");
    if (!(d.prestige >= 0.0 && d.prestige <= 1.0)) {
      throw ConfigError("department " + std::to_string(j) + " prestige outside [0, 1]");
    }
  }
  const TierAssignment tiers = assign_tiers(departments, std::span<const CandidateProfile>{},
                                            config.tier_boundaries);
  for (std::size_t j = 0; j < departments.size(); ++j) departments[j].tier = tiers.department_tier[j];
  alignment = AlignmentParams::uniform(static_cast<std::size_t>(config.p_d));
}

YearSeeds year_seeds(std::uint64_t master, int replication, Phase phase, int year) {
  const auto r = static_cast<std::uint64_t>(replication);
  const auto p = static_cast<std::uint64_t>(phase);
  const auto y = static_cast<std::uint64_t>(static_cast<std::int64_t>(year));
  return {derive_seed(master, Stream::activation, r, p, y),
          derive_seed(master, Stream::cohort, r, p, y),
          derive_seed(master, Stream::participation, r, p, y),
          derive_seed(master, Stream::bootstrap, r, p, y)};
}

std::vector<bool> draw_activation(int departments, double probability, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<bool> active(static_cast<std::size_t>(departments));
  for (std::size_t j = 0; j < active.size(); ++j) active[j] = rng.bernoulli(probability);
  return active;
}

std::vector<CandidateProfile> draw_cohort(const MarketConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const auto pv = static_cast<std::size_t>(cfg.p_v);
  const auto pd = static_cast<std::size_t>(cfg.p_d);
  const auto nf = static_cast<std::size_t>(std::max(0, cfg.item_factors));
  const double c = cfg.quality_correlation;
  const double item_scale = 1.0 / std::sqrt(1.0 + cfg.item_noise * cfg.item_noise);
  std::vector<CandidateProfile> cohort(static_cast<std::size_t>(cfg.n));
  std::vector<double> factors(nf);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    auto& cand = cohort[i];
    cand.id = static_cast<int>(i);
    const double common = rng.normal();
    cand.quality.resize(pv);
    for (auto& v : cand.quality) {
      v = normal_cdf(std::sqrt(c) * common + std::sqrt(1.0 - c) * rng.normal());
    }
    for (auto& f : factors) f = rng.normal();
    cand.true_prefs.resize(pd);
    for (std::size_t k = 0; k < pd; ++k) {
      const double e = rng.normal();
      const double z = nf == 0 ? e : (factors[k % nf] + cfg.item_noise * e) * item_scale;
      cand.true_prefs[k] = normal_cdf(z);
    }
    cand.reported_prefs = cand.true_prefs;
  }
  return cohort;
}

std::vector<int> participation_order(int candidates, std::uint64_t seed) {
  Rng rng(seed);
  return rng.permutation(candidates);
}

YearInputs draw_year_inputs(const Market& market, int replication, Phase phase, int year) {
  const YearSeeds s = year_seeds(market.config.seed, replication, phase, year);
  YearInputs in;
  in.year = year;
  in.active = draw_activation(market.m(), market.config.activation_prob, s.activation);
  in.cohort = draw_cohort(market.config, s.cohort);
  in.participation_order = participation_order(market.n(), s.participation);
  return in;
}

LearnerSpec learner_spec_for(const MarketConfig& cfg, const MechanismSpec& mechanism) {
  LearnerSpec spec;
  spec.kind = cfg.learner;
  spec.lambda_per_sample = cfg.lambda;
  spec.use_signal = mechanism.kind == MechanismSpec::Kind::aea;
  return spec;
}

namespace {

// Pool order is candidate id order; descending preference lists break ties
// by ascending id.
std::vector<int> sorted_by(std::vector<int> ids, const std::vector<double>& mat, std::size_t row,
                           std::size_t stride, bool by_row) {
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    const double va = by_row ? mat[row * stride + static_cast<std::size_t>(a)]
                             : mat[static_cast<std::size_t>(a) * stride + row];
    const double vb = by_row ? mat[row * stride + static_cast<std::size_t>(b)]
                             : mat[static_cast<std::size_t>(b) * stride + row];
    if (va != vb) return va > vb;
    return a < b;
  });
  return ids;
}

}  // namespace

YearSnapshot simulate_year(const Market& market, const MechanismSpec& mechanism, YearInputs inputs,
                           const Ranker& ranker, bool keep_diagnostics) {
  const MarketConfig& cfg = market.config;
  const auto m = static_cast<std::size_t>(market.m());
  YearSnapshot snap;
  snap.year = inputs.year;
  snap.mechanism = mechanism.kind;
  snap.rho = mechanism.effective_rho();
  snap.active = std::move(inputs.active);
  snap.cohort = std::move(inputs.cohort);
  auto& cohort = snap.cohort;
  const std::size_t n = cohort.size();

  apply_signaling(cohort, mechanism, inputs.participation_order, market.m());

  const TierAssignment tiers = assign_tiers(market.departments, cohort, cfg.tier_boundaries);
  snap.department_tier = tiers.department_tier;
  snap.candidate_tier = tiers.candidate_tier;
  for (std::size_t i = 0; i < n; ++i) cohort[i].tier = tiers.candidate_tier[i];

  std::vector<std::vector<int>> tier_pools(static_cast<std::size_t>(tiers.tiers) + 1);
  for (int t = 1; t <= tiers.tiers; ++t) {
    tier_pools[static_cast<std::size_t>(t)] = screening_pool(t, tiers.candidate_tier);
  }
  snap.pools.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (snap.active[j]) snap.pools[j] = tier_pools[static_cast<std::size_t>(market.departments[j].tier)];
  }

  const AlignmentParams& params = market.alignment;
  snap.floors = nondisclosure_floors(market.departments, cohort, params);
  snap.f_true.resize(m * n);
  snap.f_effective.resize(m * n);
  snap.u_true.resize(m * n);
  snap.u_effective.resize(m * n);
  snap.v.resize(m * n);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& dept = market.departments[j];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& cand = cohort[i];
      const double ft = alignment_score(cand.true_prefs, dept.attributes, params);
      double fe = snap.floors[j];
      if (cand.participates && cand.discloses_to(dept.id)) {
        fe = cand.reported_prefs == cand.true_prefs
                 ? ft
                 : alignment_score(cand.reported_prefs, dept.attributes, params);
      }
      const std::size_t e = j * n + i;
      snap.f_true[e] = ft;
      snap.f_effective[e] = fe;
      snap.v[e] = candidate_utility(dept.prestige, ft, cfg.beta);
    }
  }

  std::vector<char> signaled(m * n, 0);
  if (mechanism.kind == MechanismSpec::Kind::aea) {
    std::vector<int> eligible;
    for (std::size_t j = 0; j < m; ++j) {
      if (snap.active[j]) eligible.push_back(static_cast<int>(j));
    }
    snap.signals = aea_signal_assignment(snap.v, market.m(), static_cast<int>(n), eligible,
                                         mechanism.signal_count);
    std::fill(snap.f_effective.begin(), snap.f_effective.end(), params.floor);
    for (std::size_t i = 0; i < n; ++i) {
      for (int j : snap.signals[i]) {
        signaled[static_cast<std::size_t>(j) * n + i] = 1;
        snap.f_effective[static_cast<std::size_t>(j) * n + i] = 1.0;
      }
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    const auto& dept = market.departments[j];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t e = j * n + i;
      snap.u_true[e] = department_utility(cohort[i].quality, snap.f_true[e], dept.utility_weights, cfg.utility);
      snap.u_effective[e] =
          department_utility(cohort[i].quality, snap.f_effective[e], dept.utility_weights, cfg.utility);
    }
  }

  if (mechanism.kind == MechanismSpec::Kind::deferred_acceptance) {
    std::vector<std::vector<int>> dept_prefs(m), cand_prefs(n);
    for (std::size_t j = 0; j < m; ++j) {
      if (!snap.active[j]) continue;
      dept_prefs[j] = sorted_by(snap.pools[j], snap.u_true, j, n, true);
      for (int i : snap.pools[j]) cand_prefs[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
    }
    for (std::size_t i = 0; i < n; ++i) cand_prefs[i] = sorted_by(cand_prefs[i], snap.v, i, n, false);
    const std::vector<int> match = deferred_acceptance(cand_prefs, dept_prefs);
    auto& out = snap.outcome;
    out.dept_of_candidate = match;
    out.hire_of_department.assign(m, -1);
    out.fill_round.assign(m, -1);
    out.active = snap.active;
    for (std::size_t i = 0; i < n; ++i) {
      if (match[i] < 0) continue;
      out.hire_of_department[static_cast<std::size_t>(match[i])] = static_cast<int>(i);
      out.fill_round[static_cast<std::size_t>(match[i])] = 0;
    }
    snap.interview_lists.resize(m);
    return snap;
  }

  snap.interview_lists.resize(m);
  std::vector<AcceptanceFeatures> feats;
  std::vector<double> utils, u_hat;
  for (std::size_t j = 0; j < m; ++j) {
    if (!snap.active[j]) continue;
    const auto& dept = market.departments[j];
    const auto& pool = snap.pools[j];
    feats.clear();
    utils.clear();
    for (int i : pool) {
      const std::size_t e = j * n + static_cast<std::size_t>(i);
      feats.push_back({dept.prestige, cohort[static_cast<std::size_t>(i)].quality_index(),
                       snap.f_effective[e], signaled[e] != 0});
      utils.push_back(snap.u_effective[e]);
    }
    std::vector<int> chosen;
    DepartmentDiagnostics diag;
    if (ranker.mode == Ranker::Mode::calibrated) {
      const ExpectedUtilities eu = predict_expected_utilities(*ranker.ensemble, feats, utils);
      CalibratedSelection sel = calibrated_interview_selection(eu, pool, ranker.alpha, dept.capacity);
      chosen = std::move(sel.selected);
      if (keep_diagnostics) {
        diag.u_hat = eu.estimate;
        diag.rank_lower = std::move(sel.bounds.lower);
        diag.included = std::move(sel.bounds.included);
        diag.quantile = sel.quantile.value;
        diag.degenerate = sel.quantile.degenerate;
      }
    } else {
      const AcceptanceModel cold = cold_start_model();
      const AcceptanceModel& model = ranker.model != nullptr ? *ranker.model : cold;
      u_hat.resize(pool.size());
      for (std::size_t p = 0; p < pool.size(); ++p) u_hat[p] = utils[p] * model.predict(feats[p]);
      chosen = plugin_top_k(pool, u_hat, dept.capacity);
      if (keep_diagnostics) {
        diag.u_hat = u_hat;
        diag.rank_lower.assign(pool.size(), 0);
        diag.included.assign(pool.size(), false);
        const std::vector<int> order = plugin_top_k(pool, u_hat, static_cast<int>(pool.size()));
        for (std::size_t r = 0; r < order.size(); ++r) {
          diag.rank_lower[static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
          diag.included[static_cast<std::size_t>(order[r])] = static_cast<int>(r) < dept.capacity;
        }
        diag.degenerate = true;
      }
    }
    auto& list = snap.interview_lists[j];
    for (int pos : chosen) list.push_back(pool[static_cast<std::size_t>(pos)]);
    if (keep_diagnostics) {
      diag.dept_id = static_cast<int>(j);
      diag.cand_id = pool;
      snap.diagnostics.push_back(std::move(diag));
    }
  }

  snap.outcome = run_offer_rounds(snap.interview_lists, snap.active, snap.v, static_cast<int>(n));
  snap.records.reserve(snap.outcome.offers.size());
  for (const auto& ev : snap.outcome.offers) {
    const std::size_t e = static_cast<std::size_t>(ev.dept) * n + static_cast<std::size_t>(ev.cand);
    OfferRecord r;
    r.year = snap.year;
    r.dept_id = ev.dept;
    r.cand_id = ev.cand;
    r.offered = true;
    r.accepted = ev.accepted;
    r.prestige = market.departments[static_cast<std::size_t>(ev.dept)].prestige;
    r.vbar = cohort[static_cast<std::size_t>(ev.cand)].quality_index();
    r.alignment = snap.f_effective[e];
    r.signal = signaled[e] != 0;
    snap.records.push_back(r);
  }
  return snap;
}

HistoryDataset run_burn_in(const Market& market, int replication) {
  const MarketConfig& cfg = market.config;
  const MechanismSpec baseline = MechanismSpec::baseline();
  const LearnerSpec spec = learner_spec_for(cfg, baseline);
  HistoryDataset history;
  AcceptanceModel model = cold_start_model();
  for (int y = 1; y <= cfg.burn_in_years; ++y) {
    // Burn-in years are numbered up to 0 so the horizon starts at year 1.
    const int year = y - cfg.burn_in_years;
    YearInputs in = draw_year_inputs(market, replication, Phase::burn_in, year);
    Ranker ranker;
    ranker.mode = Ranker::Mode::plugin;
    ranker.model = &model;
    const YearSnapshot snap = simulate_year(market, baseline, std::move(in), ranker);
    history.append(snap.records);
    const YearSeeds s = year_seeds(cfg.seed, replication, Phase::burn_in, year);
    model = fit_acceptance_model(history.offers(), spec, s.bootstrap);
  }
  return history;
}

void run_horizon(const Market& market, const MechanismSpec& mechanism, int replication,
                 HistoryDataset& history, const YearObserver& observe, bool keep_diagnostics) {
  const MarketConfig& cfg = market.config;
  const LearnerSpec spec = learner_spec_for(cfg, mechanism);
  const bool learns = mechanism.kind != MechanismSpec::Kind::deferred_acceptance;
  for (int year = 1; year <= cfg.years; ++year) {
    const YearSeeds s = year_seeds(cfg.seed, replication, Phase::horizon, year);
    YearInputs in = draw_year_inputs(market, replication, Phase::horizon, year);
    Ranker ranker;
    ranker.alpha = cfg.alpha;
    AcceptanceEnsemble ensemble;
    AcceptanceModel model;
    if (learns && cfg.ranking == RankingMode::calibrated) {
      ensemble = bootstrap_ensemble(history, cfg.B, spec, s.bootstrap);
      ranker.mode = Ranker::Mode::calibrated;
      ranker.ensemble = &ensemble;
    } else if (learns) {
      model = fit_acceptance_model(history.offers(), spec, s.bootstrap);
      ranker.mode = Ranker::Mode::plugin;
      ranker.model = &model;
    }
    YearSnapshot snap = simulate_year(market, mechanism, std::move(in), ranker, keep_diagnostics);
    history.append(snap.records);
    if (observe) observe(snap);
  }
}

}  // namespace jobmarket
