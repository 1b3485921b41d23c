#include "jobmarket/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jobmarket/ranking.hpp"
#include "jobmarket/rng.hpp"

namespace jobmarket {

InformativenessResult dept_informativeness_probe(const InformativenessInstance& inst) {
  if (inst.dims.empty()) throw std::invalid_argument("informativeness probe: no dimensions given");
  for (std::size_t s = 0; s < inst.dims.size(); ++s) {
    if (inst.dims[s] < 0 || inst.dims[s] > inst.items || (s > 0 && inst.dims[s] <= inst.dims[s - 1])) {
      throw std::invalid_argument("informativeness probe: dims must increase within [0, items]");
    }
  }
  if (inst.simulations < 2 || inst.pool < 1 || inst.slots < 1) {
    throw std::invalid_argument("informativeness probe: needs pool, slots >= 1 and simulations >= 2");
  }
  const auto n = static_cast<std::size_t>(inst.pool);
  const auto P = static_cast<std::size_t>(inst.items);
  const auto pv = static_cast<std::size_t>(inst.quality_dims);
  const std::size_t D = inst.dims.size();
  Rng rng(derive_seed(inst.seed, Stream::probe));

  std::vector<double> d(P), mu(P), q(n * P), vbar(n), u_true(n), score(n);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<double> sum(D, 0.0), sum_sq(D, 0.0), step_sum(D, 0.0), step_sq(D, 0.0), w(D);

  for (int s = 0; s < inst.simulations; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      d[k] = rng.uniform();
      // E|q - d| for q uniform on [0, 1].
      mu[k] = 0.5 * (d[k] * d[k] + (1.0 - d[k]) * (1.0 - d[k]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < pv; ++k) v += rng.uniform();
      vbar[i] = v / static_cast<double>(pv);
      double dist = 0.0;
      for (std::size_t k = 0; k < P; ++k) {
        q[i * P + k] = rng.uniform();
        dist += std::abs(q[i * P + k] - d[k]);
      }
      u_true[i] = vbar[i] * (0.5 + 0.5 * (1.0 - dist / static_cast<double>(P)));
    }
    for (std::size_t a = 0; a < D; ++a) {
      const auto p = static_cast<std::size_t>(inst.dims[a]);
      double unseen = 0.0;
      for (std::size_t k = p; k < P; ++k) unseen += mu[k];
      for (std::size_t i = 0; i < n; ++i) {
        double seen = 0.0;
        for (std::size_t k = 0; k < p; ++k) seen += std::abs(q[i * P + k] - d[k]);
        score[i] = vbar[i] * (0.5 + 0.5 * (1.0 - (seen + unseen) / static_cast<double>(P)));
      }
      double total = 0.0;
      for (int pos : plugin_top_k(ids, score, inst.slots)) total += u_true[static_cast<std::size_t>(pos)];
      w[a] = total;
      sum[a] += total;
      sum_sq[a] += total * total;
      if (a > 0) {
        const double diff = w[a] - w[a - 1];
        step_sum[a] += diff;
        step_sq[a] += diff * diff;
      }
    }
  }

  const double S = inst.simulations;
  auto se = [S](double s1, double s2) {
    const double mean = s1 / S;
    return std::sqrt(std::max(0.0, (s2 - S * mean * mean) / (S - 1.0)) / S);
  };
  InformativenessResult r;
  r.dims = inst.dims;
  for (std::size_t a = 0; a < D; ++a) {
    r.welfare.push_back(sum[a] / S);
    r.welfare_se.push_back(se(sum[a], sum_sq[a]));
    if (a > 0) {
      r.step_gain.push_back(step_sum[a] / S);
      r.step_se.push_back(se(step_sum[a], step_sq[a]));
    }
  }
  return r;
}

}  // namespace jobmarket
