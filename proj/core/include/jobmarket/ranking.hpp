#pragma once

#include <span>
#include <vector>

#include "jobmarket/acceptance.hpp"

namespace jobmarket {

/// Pairs whose bootstrap spread falls below this are excluded from the max
/// statistic and compared by the sign of their point difference.
inline constexpr double kSigmaTolerance = 1e-12;

/// Pairwise comparison summary over one pool. Matrices are size x size,
/// row-major, with delta_hat(i, l) = Û_i - Û_l.
struct PairwiseStats {
  std::size_t size = 0;
  std::size_t B = 0;
  std::vector<double> delta_hat;
  std::vector<double> sigma_hat;  // sample SD (divisor B-1) of the B deltas
  // Z^(b): max over ordered pairs of (Δ^(b) - Δ̂) / σ̂, computed while the
  // draws stream past. -inf when no pair is usable.
  std::vector<double> max_stat;
  std::size_t usable_pairs = 0;  // unordered pairs with σ̂ >= tolerance

  double delta(std::size_t i, std::size_t l) const { return delta_hat[i * size + l]; }
  double sigma(std::size_t i, std::size_t l) const { return sigma_hat[i * size + l]; }
};

PairwiseStats pairwise_stats(const ExpectedUtilities& u);

struct StatQuantile {
  double value = 0.0;
  bool degenerate = false;  // every pair had σ̂ below tolerance
};

/// Order statistic at 1-based index ceil((1 - alpha) * size) of `z`.
double order_statistic_quantile(std::span<const double> z, double alpha);

StatQuantile max_stat_quantile(const PairwiseStats& stats, double alpha);

struct RankBounds {
  std::vector<int> lower;      // R̲_i, 1-based
  std::vector<bool> included;  // R̲_i <= k
};

/// R̲_i = 1 + #{l : Δ̂_li > c σ̂_li}.
RankBounds rank_lower_bounds(const PairwiseStats& stats, double c, int k);

/// Interview set as pool positions, ordered by Û descending then id ascending.
/// Takes the k best of {R̲ <= k}; when that set is short, the remaining slots
/// go to the best of the rest of the pool.
std::vector<int> select_interviews(std::span<const int> ids, std::span<const double> u_hat,
                                   const RankBounds& bounds, int k);

/// Plug-in top-k by Û with the same ordering rule.
std::vector<int> plugin_top_k(std::span<const int> ids, std::span<const double> u_hat, int k);

struct CalibratedSelection {
  std::vector<int> selected;
  RankBounds bounds;
  StatQuantile quantile;
};

/// The full pipeline for one department: stats, quantile, bounds, selection.
CalibratedSelection calibrated_interview_selection(const ExpectedUtilities& u,
                                                   std::span<const int> ids, double alpha, int k);

}  // namespace jobmarket
