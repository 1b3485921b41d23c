#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace jobmarket {

/// A hiring department. `id` equals the department's index in the market's
/// department vector; `tier` is 1-based with tier 1 the most prestigious.
struct DepartmentProfile {
  int id = 0;
  std::string name;
  int region = 0;
  std::vector<double> attributes;       // d_j, each in [0,1]
  double prestige = 0.0;                // s_j in [0,1]
  int tier = 1;
  int capacity = 5;                     // interviews per cycle
  std::vector<double> utility_weights;  // simplex over quality dimensions
};

/// A candidate in one annual cohort. `id` equals the index in the cohort.
struct CandidateProfile {
  int id = 0;
  std::vector<double> quality;         // v_i in [0,1]^p_v
  std::vector<double> true_prefs;      // q*_i
  std::vector<double> reported_prefs;  // q_i (what departments see)
  std::vector<int> disclosure_set;     // sorted department ids
  bool participates = false;
  int tier = 1;

  /// Uniform mean of the quality vector; the scalar used for candidate
  /// tiering and as the learner's quality feature.
  double quality_index() const {
    if (quality.empty()) return 0.0;
    return std::accumulate(quality.begin(), quality.end(), 0.0) /
           static_cast<double>(quality.size());
  }

  bool discloses_to(int dept) const {
    return std::binary_search(disclosure_set.begin(), disclosure_set.end(), dept);
  }
};

/// Weighted-L1 alignment parameters: f = floor + (1 - floor) * (1 - sum w|q-d|).
struct AlignmentParams {
  std::vector<double> item_weights;
  double floor = 0.5;

  static AlignmentParams uniform(std::size_t items) {
    return {std::vector<double>(items, items == 0 ? 0.0 : 1.0 / static_cast<double>(items)),
            0.5};
  }
};

struct UtilityForm {
  enum class Kind { multiplicative, power_weighted };
  Kind kind = Kind::multiplicative;
  double gamma = 1.0;  // exponent on alignment for power_weighted
};

enum class LearnerKind { logistic, mlp, intercept_only };

/// Horizon-year interview ranking: confidence-calibrated selection over
/// a bootstrap ensemble, or plug-in top-k under a single fitted model.
enum class RankingMode { calibrated, plugin };

/// One offer (or interview without offer) observed in a hiring cycle.
struct OfferRecord {
  int year = 0;
  int dept_id = 0;
  int cand_id = 0;
  bool offered = false;   // X
  bool accepted = false;  // Y
  double prestige = 0.0;  // s_j at offer time
  double vbar = 0.0;      // candidate quality index
  double alignment = 0.5; // f the department used
  bool signal = false;    // binary interest signal (AEA arm only)
};

/// All knobs of one simulated market. Field names double as config-file keys.
struct MarketConfig {
  int m = 103;
  int n = 300;
  int p_d = 15;
  int p_v = 3;
  std::vector<int> tier_boundaries{10, 25, 50};  // rank cutoffs, T = size + 1
  int years = 10;
  int burn_in_years = 20;
  int replications = 200;
  double rho = 1.0;
  double alpha = 0.1;
  int B = 100;
  double activation_prob = 0.6;
  int capacity_default = 5;
  std::uint64_t seed = 20240601;

  // Candidate utility mix between prestige and alignment.
  double beta = 0.6;
  // Ridge penalty per observation for the acceptance learner.
  double lambda = 0.1;
  LearnerKind learner = LearnerKind::logistic;
  RankingMode ranking = RankingMode::calibrated;
  UtilityForm utility{};

  // Synthetic population generator.
  int item_factors = 3;
  double item_noise = 0.6;
  double quality_correlation = 0.0;
  double weight_concentration = 1.0;
  double prestige_noise = 0.01;

  int tiers() const { return static_cast<int>(tier_boundaries.size()) + 1; }

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

}  // namespace jobmarket
