#include "jobmarket/tiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "jobmarket/error.hpp"

namespace jobmarket {
namespace {

void check_boundaries(std::span<const int> boundaries, int population, const char* what) {
  int prev = 0;
  for (int b : boundaries) {
    if (b <= prev) {
      throw ConfigError(std::string(what) + " tier boundaries must be strictly increasing and positive");
    }
    prev = b;
  }
  if (!boundaries.empty() && boundaries.back() >= population) {
    throw ConfigError(std::string("fewer ") + what + "s than tiers: last boundary " +
                      std::to_string(boundaries.back()) + " leaves the bottom tier empty (" +
                      std::to_string(population) + " " + what + "s)");
  }
}

// Tier (1-based) for each position of `order`, given rank cutoffs.
std::vector<int> tiers_from_order(const std::vector<int>& order, std::span<const int> cutoffs) {
  std::vector<int> tier(order.size(), 1);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto above = std::upper_bound(cutoffs.begin(), cutoffs.end(), static_cast<int>(rank));
    tier[static_cast<std::size_t>(order[rank])] = 1 + static_cast<int>(above - cutoffs.begin());
  }
  return tier;
}

}  // namespace

std::vector<int> candidate_boundaries_for(std::span<const int> department_boundaries,
                                          int departments, int candidates) {
  std::vector<int> out;
  out.reserve(department_boundaries.size());
  for (int b : department_boundaries) {
    const double scaled = static_cast<double>(b) * candidates / static_cast<double>(departments);
    out.push_back(static_cast<int>(std::floor(scaled + 0.5)));
  }
  return out;
}

TierAssignment assign_tiers(std::span<const DepartmentProfile> departments,
                            std::span<const CandidateProfile> candidates,
                            std::span<const int> department_boundaries) {
  const auto cand_bounds = candidate_boundaries_for(
      department_boundaries, static_cast<int>(departments.size()),
      static_cast<int>(candidates.size()));
  return assign_tiers(departments, candidates, department_boundaries, cand_bounds);
}

TierAssignment assign_tiers(std::span<const DepartmentProfile> departments,
                            std::span<const CandidateProfile> candidates,
                            std::span<const int> department_boundaries,
                            std::span<const int> candidate_boundaries) {
  if (department_boundaries.size() != candidate_boundaries.size()) {
    throw ConfigError("department and candidate tier boundaries differ in count");
  }
  check_boundaries(department_boundaries, static_cast<int>(departments.size()), "department");
  if (!candidates.empty()) {
    check_boundaries(candidate_boundaries, static_cast<int>(candidates.size()), "candidate");
  }

  TierAssignment out;
  out.tiers = static_cast<int>(department_boundaries.size()) + 1;
  out.candidate_boundaries.assign(candidate_boundaries.begin(), candidate_boundaries.end());

  std::vector<int> dept_order(departments.size());
  std::iota(dept_order.begin(), dept_order.end(), 0);
  std::stable_sort(dept_order.begin(), dept_order.end(), [&](int a, int b) {
    const auto& da = departments[static_cast<std::size_t>(a)];
    const auto& db = departments[static_cast<std::size_t>(b)];
    if (da.prestige != db.prestige) return da.prestige > db.prestige;
    return da.id < db.id;
  });
  out.department_tier = tiers_from_order(dept_order, department_boundaries);

  std::vector<double> index(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) index[i] = candidates[i].quality_index();
  std::vector<int> cand_order(candidates.size());
  std::iota(cand_order.begin(), cand_order.end(), 0);
  std::stable_sort(cand_order.begin(), cand_order.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (index[ia] != index[ib]) return index[ia] > index[ib];
    return candidates[ia].id < candidates[ib].id;
  });
  out.candidate_tier = tiers_from_order(cand_order, candidate_boundaries);
  return out;
}

std::vector<int> screening_pool(int tier, std::span<const int> candidate_tier) {
  std::vector<int> pool;
  for (std::size_t i = 0; i < candidate_tier.size(); ++i) {
    if (candidate_tier[i] <= tier) pool.push_back(static_cast<int>(i));
  }
  return pool;
}

}  // namespace jobmarket
