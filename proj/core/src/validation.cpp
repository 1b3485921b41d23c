#include "jobmarket/validation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "jobmarket/mechanisms.hpp"
#include "jobmarket/ranking.hpp"
#include "jobmarket/rng.hpp"

namespace jobmarket {

CoverageResult run_coverage_suite(const CoverageConfig& cfg) {
  if (cfg.pool < 1 || cfg.k < 1 || cfg.B < 2 || cfg.trials < 1) {
    throw std::invalid_argument("coverage suite: pool, k, trials >= 1 and B >= 2 required");
  }
  const auto n = static_cast<std::size_t>(cfg.pool);
  const auto B = static_cast<std::size_t>(cfg.B);
  Rng rng(derive_seed(cfg.seed, Stream::validation, 1));
  std::vector<double> mu(n), sigma(n);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  CoverageResult r;
  r.trials = cfg.trials;
  for (int t = 0; t < cfg.trials; ++t) {
    ExpectedUtilities u;
    u.candidates = n;
    u.B = B;
    u.draws.resize(n * B);
    u.estimate.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      mu[i] = cfg.mu_low + (cfg.mu_high - cfg.mu_low) * rng.uniform();
      sigma[i] = cfg.sigma_low + (cfg.sigma_high - cfg.sigma_low) * rng.uniform();
      u.estimate[i] = mu[i] + sigma[i] * rng.normal();
      for (std::size_t b = 0; b < B; ++b) u.draws[i * B + b] = u.estimate[i] + sigma[i] * rng.normal();
    }
    const CalibratedSelection sel = calibrated_interview_selection(u, ids, cfg.alpha, cfg.k);
    bool rank_ok = true, top_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      int true_rank = 1;
      for (std::size_t l = 0; l < n; ++l) true_rank += mu[l] > mu[i] ? 1 : 0;
      if (sel.bounds.lower[i] > true_rank) rank_ok = false;
      if (true_rank <= cfg.k && !sel.bounds.included[i]) top_ok = false;
    }
    r.rank_covered += rank_ok;
    r.top_k_covered += top_ok;
  }
  return r;
}

ReductionResult run_degenerate_reduction(int instances, std::uint64_t seed) {
  Rng rng(derive_seed(seed, Stream::validation, 2));
  ReductionResult r;
  r.instances = instances;
  for (int t = 0; t < instances; ++t) {
    const auto n = static_cast<std::size_t>(1 + rng.below(40));
    const int k = 1 + static_cast<int>(rng.below(8));
    const auto B = static_cast<std::size_t>(2 + rng.below(20));
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);
    // Coarse levels force tied utilities.
    const int levels = 1 + static_cast<int>(rng.below(12));
    ExpectedUtilities u;
    u.candidates = n;
    u.B = B;
    u.estimate.resize(n);
    u.draws.resize(n * B);
    for (std::size_t i = 0; i < n; ++i) {
      u.estimate[i] = static_cast<double>(rng.below(static_cast<std::uint64_t>(levels))) / levels;
      std::fill_n(u.draws.begin() + static_cast<std::ptrdiff_t>(i * B), B, u.estimate[i]);
    }
    const CalibratedSelection sel = calibrated_interview_selection(u, ids, 0.1, k);

    std::vector<bool> taken(n, false);
    std::vector<int> expected;
    for (std::size_t s = 0; s < std::min<std::size_t>(n, static_cast<std::size_t>(k)); ++s) {
      int best = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const auto bi = static_cast<std::size_t>(best);
        if (best < 0 || u.estimate[i] > u.estimate[bi] ||
            (u.estimate[i] == u.estimate[bi] && ids[i] < ids[bi])) {
          best = static_cast<int>(i);
        }
      }
      taken[static_cast<std::size_t>(best)] = true;
      expected.push_back(best);
    }
    if (sel.selected != expected) ++r.mismatches;
  }
  return r;
}

StabilityResult run_da_stability(int max_size, int profiles, std::uint64_t seed) {
  Rng rng(derive_seed(seed, Stream::validation, 3));
  StabilityResult r;
  for (int n = 1; n <= max_size; ++n) {
    for (int m = 1; m <= max_size; ++m) {
      for (int p = 0; p < profiles; ++p) {
        std::vector<std::vector<int>> cprefs(static_cast<std::size_t>(n)), dprefs(static_cast<std::size_t>(m));
        for (auto& l : cprefs) l = rng.permutation(m);
        for (auto& l : dprefs) l = rng.permutation(n);
        const std::vector<int> match = deferred_acceptance(cprefs, dprefs);
        // Utilities: higher for earlier list positions.
        const auto un = static_cast<std::size_t>(n);
        std::vector<double> u(static_cast<std::size_t>(m) * un), v(u.size());
        for (std::size_t j = 0; j < dprefs.size(); ++j) {
          for (std::size_t r2 = 0; r2 < dprefs[j].size(); ++r2) {
            u[j * un + static_cast<std::size_t>(dprefs[j][r2])] = static_cast<double>(n - static_cast<int>(r2));
          }
        }
        for (std::size_t i = 0; i < cprefs.size(); ++i) {
          for (std::size_t r2 = 0; r2 < cprefs[i].size(); ++r2) {
            v[static_cast<std::size_t>(cprefs[i][r2]) * un + i] = static_cast<double>(m - static_cast<int>(r2));
          }
        }
        std::vector<int> hire(static_cast<std::size_t>(m), -1);
        for (std::size_t i = 0; i < match.size(); ++i) {
          if (match[i] >= 0) hire[static_cast<std::size_t>(match[i])] = static_cast<int>(i);
        }
        std::vector<std::vector<int>> eligible(static_cast<std::size_t>(m), std::vector<int>(un));
        for (auto& e : eligible) std::iota(e.begin(), e.end(), 0);
        ++r.instances;
        if (count_blocking_pairs(match, hire, eligible, u, v, n).count != 0) ++r.unstable;
      }
    }
  }
  return r;
}

}  // namespace jobmarket
