#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jobmarket {

/// Synthetic pools with known expected utilities μ_i and Gaussian estimation
/// noise: Û_i = μ_i + σ_i ε_i and Û_i^(b) = Û_i + σ_i ε_i^(b).
struct CoverageConfig {
  int trials = 500;
  int pool = 30;
  int k = 5;
  int B = 100;
  double alpha = 0.1;
  double mu_low = 0.1;
  double mu_high = 0.5;
  double sigma_low = 0.01;
  double sigma_high = 0.04;
  std::uint64_t seed = 101;
};

struct CoverageResult {
  int trials = 0;
  int rank_covered = 0;   // R̲_i <= r_i for every i
  int top_k_covered = 0;  // every true top-k candidate has R̲_i <= k

  double rank_coverage() const { return trials ? static_cast<double>(rank_covered) / trials : 0.0; }
  double top_k_coverage() const { return trials ? static_cast<double>(top_k_covered) / trials : 0.0; }
};

CoverageResult run_coverage_suite(const CoverageConfig& cfg);

struct ReductionResult {
  int instances = 0;
  int mismatches = 0;
};

/// Zero-variance draws: calibrated selection against a selection-by-argmax
/// top-k on random pools (random ids, capacities, and tied utilities).
ReductionResult run_degenerate_reduction(int instances, std::uint64_t seed);

struct StabilityResult {
  int instances = 0;
  int unstable = 0;
};

/// Deferred acceptance on random complete strict preferences for every
/// market size up to max_size x max_size, `profiles` profiles each.
StabilityResult run_da_stability(int max_size, int profiles, std::uint64_t seed);

/// One named validation outcome.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

}  // namespace jobmarket
