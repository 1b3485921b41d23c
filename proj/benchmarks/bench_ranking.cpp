#include <benchmark/benchmark.h>

#include "jobmarket/acceptance.hpp"
#include "jobmarket/ranking.hpp"
#include "jobmarket/rng.hpp"

using namespace jobmarket;

namespace {

ExpectedUtilities random_pool(std::size_t n, std::size_t B) {
  Rng rng(1);
  ExpectedUtilities u;
  u.candidates = n;
  u.B = B;
  u.draws.resize(n * B);
  u.estimate.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = rng.uniform();
    for (std::size_t b = 0; b < B; ++b) {
      u.draws[i * B + b] = mu + 0.02 * rng.normal();
      u.estimate[i] += u.draws[i * B + b] / static_cast<double>(B);
    }
  }
  return u;
}

HistoryDataset random_history(int rows) {
  Rng rng(2);
  HistoryDataset h;
  for (int i = 0; i < rows; ++i) {
    OfferRecord r;
    r.offered = true;
    r.prestige = rng.uniform();
    r.vbar = rng.uniform();
    r.alignment = 0.5 + 0.5 * rng.uniform();
    r.accepted = rng.bernoulli(0.3 * r.alignment + 0.2 * r.prestige);
    h.records.push_back(r);
  }
  return h;
}

// Pool sizes of the four default tiers at n = 300.
void BM_PairwiseStats(benchmark::State& state) {
  const auto u = random_pool(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_stats(u));
}
BENCHMARK(BM_PairwiseStats)->ArgsProduct({{29, 73, 146, 300}, {50, 100}})->Unit(benchmark::kMillisecond);

void BM_CalibratedSelection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_pool(n, 100);
  std::vector<int> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i);
  for (auto _ : state) benchmark::DoNotOptimize(calibrated_interview_selection(u, ids, 0.1, 5));
}
BENCHMARK(BM_CalibratedSelection)->Arg(73)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_BootstrapFit(benchmark::State& state) {
  const auto h = random_history(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_ensemble(h, 50, LearnerSpec{}, 3));
}
BENCHMARK(BM_BootstrapFit)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_LogisticFit(benchmark::State& state) {
  const auto h = random_history(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_acceptance_model(h.records, LearnerSpec{}, 3));
}
BENCHMARK(BM_LogisticFit)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
