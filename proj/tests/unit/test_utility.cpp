#include <gtest/gtest.h>

#include "jobmarket/rng.hpp"
#include "jobmarket/utility.hpp"

using namespace jobmarket;

TEST(Alignment, PerfectMatchIsOne) {
  const std::vector<double> q{0.2, 0.7, 0.4};
  EXPECT_DOUBLE_EQ(alignment_score(q, q, AlignmentParams::uniform(3)), 1.0);
}

TEST(Alignment, MaximalDistanceIsFloor) {
  const std::vector<double> q{0, 1, 0, 1}, d{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(alignment_score(q, d, AlignmentParams::uniform(4)), 0.5);
}

TEST(Alignment, TwoItemHandValue) {
  const std::vector<double> q{1, 0}, d{0.5, 0.5};
  EXPECT_DOUBLE_EQ(alignment_score(q, d, AlignmentParams::uniform(2)), 0.75);
}

TEST(Alignment, LengthMismatchThrows) {
  const std::vector<double> q{1, 0}, d{0.5};
  EXPECT_THROW(alignment_score(q, d, AlignmentParams::uniform(2)), std::invalid_argument);
}

TEST(NondisclosureFloor, MinimumOrFallback) {
  EXPECT_DOUBLE_EQ(nondisclosure_floor(std::vector<double>{0.8, 0.6, 0.9}), 0.6);
  EXPECT_DOUBLE_EQ(nondisclosure_floor(std::vector<double>{0.7}), 0.7);
  EXPECT_DOUBLE_EQ(nondisclosure_floor(std::vector<double>{}), 0.5);
}

TEST(EffectiveAlignment, DiscloserAndNondiscloser) {
  DepartmentProfile dept;
  dept.id = 0;
  dept.attributes = {0.3, 0.6};
  CandidateProfile discloser;
  discloser.reported_prefs = {0.3, 0.6};
  discloser.disclosure_set = {0};
  CandidateProfile hidden;
  hidden.reported_prefs = {0.3, 0.6};
  const auto params = AlignmentParams::uniform(2);
  EXPECT_DOUBLE_EQ(effective_alignment(discloser, dept, 0.55, params), 1.0);
  EXPECT_DOUBLE_EQ(effective_alignment(hidden, dept, 0.55, params), 0.55);
}

TEST(EffectiveAlignment, FloorsComputedFromDisclosersOnly) {
  DepartmentProfile dept;
  dept.attributes = {0.0, 0.0};
  std::vector<CandidateProfile> cohort(3);
  cohort[0].reported_prefs = {0.9, 0.9};  // f = 0.55
  cohort[0].disclosure_set = {0};
  cohort[1].reported_prefs = {0.2, 0.0};  // f = 0.95
  cohort[1].disclosure_set = {0};
  cohort[2].reported_prefs = {1.0, 1.0};  // not disclosed, would be 0.5
  const std::vector<DepartmentProfile> depts{dept};
  const auto floors = nondisclosure_floors(depts, cohort, AlignmentParams::uniform(2));
  ASSERT_EQ(floors.size(), 1U);
  EXPECT_NEAR(floors[0], 0.55, 1e-15);
}

TEST(EffectiveAlignment, NobodyDisclosesGivesFlatHalf) {
  Rng rng(3);
  std::vector<DepartmentProfile> depts(4);
  std::vector<CandidateProfile> cohort(6);
  for (auto& d : depts) d.attributes = {rng.uniform(), rng.uniform()};
  for (auto& c : cohort) c.reported_prefs = {rng.uniform(), rng.uniform()};
  for (std::size_t j = 0; j < depts.size(); ++j) depts[j].id = static_cast<int>(j);
  const auto params = AlignmentParams::uniform(2);
  const auto floors = nondisclosure_floors(depts, cohort, params);
  for (std::size_t j = 0; j < depts.size(); ++j) {
    for (const auto& c : cohort) EXPECT_DOUBLE_EQ(effective_alignment(c, depts[j], floors[j], params), 0.5);
  }
}

TEST(DepartmentUtility, Anchors) {
  const std::vector<double> w{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_DOUBLE_EQ(department_utility(std::vector<double>{0, 0, 0}, 0.8, w), 0.0);
  EXPECT_NEAR(department_utility(std::vector<double>{1, 1, 1}, 1.0, w), 1.0, 1e-15);
  EXPECT_NEAR(department_utility(std::vector<double>{0.8, 0.4}, 0.75, std::vector<double>{0.5, 0.5}), 0.45, 1e-15);
}

TEST(DepartmentUtility, PowerWeightedForm) {
  const UtilityForm form{UtilityForm::Kind::power_weighted, 2.0};
  EXPECT_NEAR(department_utility(std::vector<double>{1.0}, 0.5, std::vector<double>{1.0}, form), 0.25, 1e-15);
}

TEST(CandidateUtility, HandValues) {
  EXPECT_DOUBLE_EQ(candidate_utility(0.37, 0.9, 1.0), 0.37);
  EXPECT_DOUBLE_EQ(candidate_utility(0.2, 1.0, 0.0), 1.0);
  EXPECT_NEAR(candidate_utility(0.8, 0.75, 0.5), 0.65, 1e-15);
}

TEST(UtilityProperties, RangesAndMonotonicity) {
  Rng rng(17);
  const std::size_t p = 5;
  const auto params = AlignmentParams::uniform(p);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> q(p), d(p), v(3);
    for (auto& x : q) x = rng.uniform();
    for (auto& x : d) x = rng.uniform();
    for (auto& x : v) x = rng.uniform();
    const auto w = rng.dirichlet(3, 1.0);
    const double f = alignment_score(q, d, params);
    ASSERT_GE(f, 0.5);
    ASSERT_LE(f, 1.0);
    const double u = department_utility(v, f, w);
    ASSERT_GE(u, 0.0);
    ASSERT_LE(u, 1.0);
    const double s = rng.uniform();
    const double vc = candidate_utility(s, f, 0.6);
    ASSERT_GE(vc, 0.0);
    ASSERT_LE(vc, 1.0);

    auto v2 = v;
    const auto k = static_cast<std::size_t>(rng.below(3));
    v2[k] = std::min(1.0, v2[k] + 0.1);
    ASSERT_GE(department_utility(v2, f, w), u);
    if (u > 0.0 && f < 1.0) {
      ASSERT_GT(department_utility(v, std::min(1.0, f + 0.01), w), u);
    }
  }
}

TEST(UtilityProperties, DisclosersNeverBelowNondisclosers) {
  Rng rng(23);
  const auto params = AlignmentParams::uniform(4);
  for (int t = 0; t < 200; ++t) {
    DepartmentProfile dept;
    dept.id = 0;
    dept.attributes = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    std::vector<CandidateProfile> cohort(10);
    for (auto& c : cohort) {
      c.reported_prefs = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
      if (rng.bernoulli(0.5)) c.disclosure_set = {0};
    }
    const std::vector<DepartmentProfile> depts{dept};
    const double floor = nondisclosure_floors(depts, cohort, params)[0];
    double min_disc = 1.0, max_hidden = 0.0;
    for (const auto& c : cohort) {
      const double f = effective_alignment(c, dept, floor, params);
      if (c.discloses_to(0)) min_disc = std::min(min_disc, f);
      else max_hidden = std::max(max_hidden, f);
    }
    ASSERT_GE(min_disc, max_hidden);
  }
}

TEST(UtilityProperties, RescalingWeightsKeepsRanking) {
  Rng rng(29);
  const auto w = rng.dirichlet(3, 1.0);
  std::vector<double> scaled(w);
  double total = 0.0;
  for (auto& x : scaled) total += (x *= 7.3);
  for (auto& x : scaled) x /= total;
  std::vector<std::vector<double>> vs(20, std::vector<double>(3));
  for (auto& v : vs) for (auto& x : v) x = rng.uniform();
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = 0; b < vs.size(); ++b) {
      const bool before = department_utility(vs[a], 0.8, w) > department_utility(vs[b], 0.8, w);
      const bool after = department_utility(vs[a], 0.8, scaled) > department_utility(vs[b], 0.8, scaled);
      EXPECT_EQ(before, after);
    }
  }
}
