#pragma once

#include <cstdint>
#include <vector>

namespace jobmarket {

/// One department screening a pool with nested questionnaire prefixes. With a
/// p-item prefix the department knows the distance on those items and
/// imputes the rest by its expectation under uniform reports, so it ranks by
/// the conditional expectation of U* given what it sees. Acceptance
/// probability is constant, so welfare is the realized sum of U* over the k
/// selected candidates.
struct InformativenessInstance {
  int pool = 60;
  int slots = 5;
  int items = 15;  // full questionnaire length
  int quality_dims = 3;
  std::vector<int> dims{3, 7, 15};  // strictly increasing prefix lengths
  int simulations = 2000;
  std::uint64_t seed = 11;
};

struct InformativenessResult {
  std::vector<int> dims;
  std::vector<double> welfare;     // mean over simulations
  std::vector<double> welfare_se;
  std::vector<double> step_gain;   // welfare[s + 1] - welfare[s], paired
  std::vector<double> step_se;
};

InformativenessResult dept_informativeness_probe(const InformativenessInstance& instance);

}  // namespace jobmarket
