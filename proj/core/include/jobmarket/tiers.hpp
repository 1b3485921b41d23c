#pragma once

#include <span>
#include <vector>

#include "jobmarket/types.hpp"

namespace jobmarket {

struct TierAssignment {
  int tiers = 1;
  std::vector<int> department_tier;     // indexed by department position
  std::vector<int> candidate_tier;      // indexed by candidate position
  std::vector<int> candidate_boundaries;  // rank cutoffs over candidates
};

/// Candidate rank cutoffs at the same population fractions as the department
/// cutoffs: round(b * n / m).
std::vector<int> candidate_boundaries_for(std::span<const int> department_boundaries,
                                          int departments, int candidates);

/// Partitions departments by descending prestige and candidates by descending
/// quality index (ties broken by ascending id). Throws ConfigError when the
/// boundaries are not strictly increasing or leave an empty tier.
TierAssignment assign_tiers(std::span<const DepartmentProfile> departments,
                            std::span<const CandidateProfile> candidates,
                            std::span<const int> department_boundaries);

/// Same as above with explicit candidate cutoffs.
TierAssignment assign_tiers(std::span<const DepartmentProfile> departments,
                            std::span<const CandidateProfile> candidates,
                            std::span<const int> department_boundaries,
                            std::span<const int> candidate_boundaries);

/// Candidate positions in the pool of a tier-`tier` department: C^(<= tier).
std::vector<int> screening_pool(int tier, std::span<const int> candidate_tier);

}  // namespace jobmarket
