#include "jobmarket/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace jobmarket {
namespace {

std::vector<int> ordered_by_utility(std::span<const int> ids, std::span<const double> u_hat,
                                    std::vector<int> positions) {
  std::sort(positions.begin(), positions.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (u_hat[ia] != u_hat[ib]) return u_hat[ia] > u_hat[ib];
    return ids[ia] < ids[ib];
  });
  return positions;
}

}  // namespace

PairwiseStats pairwise_stats(const ExpectedUtilities& u) {
  if (u.B < 2) throw std::invalid_argument("pairwise_stats: at least two bootstrap draws required");
  const std::size_t n = u.candidates;
  const std::size_t B = u.B;
  PairwiseStats s;
  s.size = n;
  s.B = B;
  s.delta_hat.assign(n * n, 0.0);
  s.sigma_hat.assign(n * n, 0.0);
  s.max_stat.assign(B, -std::numeric_limits<double>::infinity());

  // Centered draws e_i^(b) = Û_i^(b) - mean_b Û_i^(b), so Δ^(b) - Δ̂ = e_i - e_l.
  // Centering on the draw mean rather than u.estimate keeps σ̂ the exact
  // sample SD even when the caller's estimate is off by rounding.
  std::vector<double> centered(n * B);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = u.draws.data() + i * B;
    double mean = 0.0;
    for (std::size_t b = 0; b < B; ++b) mean += row[b];
    mean /= static_cast<double>(B);
    for (std::size_t b = 0; b < B; ++b) centered[i * B + b] = row[b] - mean;
  }
  const double inv_dof = 1.0 / static_cast<double>(B - 1);
  double* z = s.max_stat.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ei = centered.data() + i * B;
    for (std::size_t l = i + 1; l < n; ++l) {
      const double* el = centered.data() + l * B;
      const double d = u.estimate[i] - u.estimate[l];
      s.delta_hat[i * n + l] = d;
      s.delta_hat[l * n + i] = -d;
      double ss = 0.0;
      for (std::size_t b = 0; b < B; ++b) {
        const double diff = ei[b] - el[b];
        ss += diff * diff;
      }
      const double sd = std::sqrt(ss * inv_dof);
      s.sigma_hat[i * n + l] = sd;
      s.sigma_hat[l * n + i] = sd;
      if (sd < kSigmaTolerance) continue;
      ++s.usable_pairs;
      // Both orientations of the pair: the max is the absolute value.
      const double inv = 1.0 / sd;
      for (std::size_t b = 0; b < B; ++b) {
        const double t = std::abs(ei[b] - el[b]) * inv;
        z[b] = t > z[b] ? t : z[b];
      }
    }
  }
  return s;
}

double order_statistic_quantile(std::span<const double> z, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (z.empty()) throw std::invalid_argument("order_statistic_quantile: empty sample");
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  // Guard against (1 - alpha) * B landing a rounding error above an integer.
  const double pos = (1.0 - alpha) * static_cast<double>(sorted.size());
  auto idx = static_cast<std::size_t>(std::ceil(pos - 1e-9));
  idx = std::clamp<std::size_t>(idx, 1, sorted.size());
  return sorted[idx - 1];
}

StatQuantile max_stat_quantile(const PairwiseStats& stats, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (stats.usable_pairs == 0) return {0.0, true};
  return {order_statistic_quantile(stats.max_stat, alpha), false};
}

RankBounds rank_lower_bounds(const PairwiseStats& stats, double c, int k) {
  const std::size_t n = stats.size;
  RankBounds r;
  r.lower.assign(n, 1);
  r.included.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int better = 0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l == i) continue;
      const double d = stats.delta(l, i);
      const double sd = stats.sigma(l, i);
      if (sd < kSigmaTolerance ? d > 0.0 : d > c * sd) ++better;
    }
    r.lower[i] = 1 + better;
    r.included[i] = r.lower[i] <= k;
  }
  return r;
}

std::vector<int> select_interviews(std::span<const int> ids, std::span<const double> u_hat,
                                   const RankBounds& bounds, int k) {
  if (ids.size() != u_hat.size() || ids.size() != bounds.lower.size()) {
    throw std::invalid_argument("select_interviews: pool, utilities and bounds differ in size");
  }
  if (k < 1) throw std::invalid_argument("select_interviews: capacity must be at least 1");
  std::vector<int> inside, outside;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    (bounds.lower[i] <= k ? inside : outside).push_back(static_cast<int>(i));
  }
  inside = ordered_by_utility(ids, u_hat, std::move(inside));
  const auto cap = static_cast<std::size_t>(k);
  if (inside.size() >= cap) {
    inside.resize(cap);
    return inside;
  }
  outside = ordered_by_utility(ids, u_hat, std::move(outside));
  for (int pos : outside) {
    if (inside.size() >= cap) break;
    inside.push_back(pos);
  }
  return ordered_by_utility(ids, u_hat, std::move(inside));
}

std::vector<int> plugin_top_k(std::span<const int> ids, std::span<const double> u_hat, int k) {
  std::vector<int> all(ids.size());
  std::iota(all.begin(), all.end(), 0);
  all = ordered_by_utility(ids, u_hat, std::move(all));
  if (all.size() > static_cast<std::size_t>(std::max(k, 0))) all.resize(static_cast<std::size_t>(k));
  return all;
}

CalibratedSelection calibrated_interview_selection(const ExpectedUtilities& u,
                                                   std::span<const int> ids, double alpha, int k) {
  CalibratedSelection out;
  if (u.candidates == 0) return out;
  if (u.candidates == 1) {
    out.bounds.lower = {1};
    out.bounds.included = {true};
    out.quantile = {0.0, true};
    out.selected = {0};
    return out;
  }
  const PairwiseStats stats = pairwise_stats(u);
  out.quantile = max_stat_quantile(stats, alpha);
  out.bounds = rank_lower_bounds(stats, out.quantile.value, k);
  out.selected = select_interviews(ids, u.estimate, out.bounds, k);
  return out;
}

}  // namespace jobmarket
