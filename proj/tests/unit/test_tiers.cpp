#include <gtest/gtest.h>

#include <algorithm>

#include "jobmarket/error.hpp"
#include "jobmarket/rng.hpp"
#include "jobmarket/tiers.hpp"

using namespace jobmarket;

namespace {

std::vector<DepartmentProfile> departments_by_rank(int m) {
  std::vector<DepartmentProfile> d(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    d[static_cast<std::size_t>(j)].id = j;
    d[static_cast<std::size_t>(j)].prestige = 1.0 - static_cast<double>(j) / m;
  }
  return d;
}

std::vector<CandidateProfile> candidates_with_index(std::vector<double> index) {
  std::vector<CandidateProfile> c(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    c[i].id = static_cast<int>(i);
    c[i].quality = {index[i]};
  }
  return c;
}

int count_tier(const std::vector<int>& tiers, int t) {
  return static_cast<int>(std::count(tiers.begin(), tiers.end(), t));
}

}  // namespace

TEST(Tiers, DefaultBoundariesGiveSizes10_15_25_53) {
  const auto depts = departments_by_rank(103);
  const std::vector<int> bounds{10, 25, 50};
  const auto ta = assign_tiers(depts, {}, bounds, std::vector<int>{1, 2, 3});
  EXPECT_EQ(ta.tiers, 4);
  EXPECT_EQ(count_tier(ta.department_tier, 1), 10);
  EXPECT_EQ(count_tier(ta.department_tier, 2), 15);
  EXPECT_EQ(count_tier(ta.department_tier, 3), 25);
  EXPECT_EQ(count_tier(ta.department_tier, 4), 53);
  EXPECT_EQ(ta.department_tier[9], 1);
  EXPECT_EQ(ta.department_tier[10], 2);
}

TEST(Tiers, CandidateCutoffsScaleWithPopulation) {
  const std::vector<int> bounds{10, 25, 50};
  EXPECT_EQ(candidate_boundaries_for(bounds, 103, 300), (std::vector<int>{29, 73, 146}));
}

TEST(Tiers, SingleTierPutsEveryoneInOnePool) {
  const auto depts = departments_by_rank(7);
  const auto cands = candidates_with_index({0.1, 0.9, 0.5, 0.3});
  const auto ta = assign_tiers(depts, cands, std::vector<int>{});
  EXPECT_EQ(ta.tiers, 1);
  for (int t : ta.department_tier) EXPECT_EQ(t, 1);
  EXPECT_EQ(screening_pool(1, ta.candidate_tier).size(), 4U);
}

TEST(Tiers, SixDepartmentsNineCandidatesHandEnumeration) {
  const auto depts = departments_by_rank(6);
  // Index order: 8 > 7 > ... > 0.
  std::vector<double> idx(9);
  for (int i = 0; i < 9; ++i) idx[static_cast<std::size_t>(i)] = 0.1 * i;
  const auto cands = candidates_with_index(idx);
  const auto ta = assign_tiers(depts, cands, std::vector<int>{2, 4}, std::vector<int>{3, 6});
  EXPECT_EQ(ta.department_tier, (std::vector<int>{1, 1, 2, 2, 3, 3}));
  EXPECT_EQ(screening_pool(1, ta.candidate_tier), (std::vector<int>{6, 7, 8}));
  EXPECT_EQ(screening_pool(2, ta.candidate_tier), (std::vector<int>{3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(screening_pool(3, ta.candidate_tier).size(), 9U);
}

TEST(Tiers, TiesBrokenByIdAtBoundary) {
  const auto depts = departments_by_rank(2);
  const auto cands = candidates_with_index({0.5, 0.5, 0.5});
  const auto ta = assign_tiers(depts, cands, std::vector<int>{1}, std::vector<int>{1});
  EXPECT_EQ(ta.candidate_tier, (std::vector<int>{1, 2, 2}));
}

TEST(Tiers, PoolsNestAndTiersPartition) {
  Rng rng(5);
  auto depts = departments_by_rank(40);
  std::vector<double> idx(120);
  for (auto& x : idx) x = rng.uniform();
  const auto cands = candidates_with_index(idx);
  const auto ta = assign_tiers(depts, cands, std::vector<int>{4, 10, 20});
  for (int t : ta.candidate_tier) {
    EXPECT_GE(t, 1);
    EXPECT_LE(t, 4);
  }
  for (int t = 1; t < ta.tiers; ++t) {
    const auto lo = screening_pool(t, ta.candidate_tier);
    const auto hi = screening_pool(t + 1, ta.candidate_tier);
    EXPECT_TRUE(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
  }
  const auto again = assign_tiers(depts, cands, std::vector<int>{4, 10, 20});
  EXPECT_EQ(again.candidate_tier, ta.candidate_tier);
  EXPECT_EQ(again.department_tier, ta.department_tier);
}

TEST(Tiers, RejectsEmptyBottomTierAndUnsortedBoundaries) {
  const auto depts = departments_by_rank(5);
  EXPECT_THROW(assign_tiers(depts, {}, std::vector<int>{2, 5}, std::vector<int>{1, 2}), ConfigError);
  EXPECT_THROW(assign_tiers(depts, {}, std::vector<int>{3, 2}, std::vector<int>{1, 2}), ConfigError);
}
