#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "jobmarket/acceptance.hpp"
#include "jobmarket/rng.hpp"

using namespace jobmarket;

namespace {

OfferRecord offer(double s, double vbar, double f, bool accepted) {
  OfferRecord r;
  r.offered = true;
  r.accepted = accepted;
  r.prestige = s;
  r.vbar = vbar;
  r.alignment = f;
  return r;
}

double true_logit(double s, double vbar, double f) { return -1.0 + 1.5 * s - 1.2 * vbar + 2.0 * (f - 0.5) * 2.0; }

std::vector<OfferRecord> logistic_history(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<OfferRecord> rows;
  for (int i = 0; i < n; ++i) {
    const double s = rng.uniform(), vbar = rng.uniform(), f = 0.5 + 0.5 * rng.uniform();
    const double p = 1.0 / (1.0 + std::exp(-true_logit(s, vbar, f)));
    rows.push_back(offer(s, vbar, f, rng.bernoulli(p)));
  }
  return rows;
}

}  // namespace

TEST(AcceptanceModel, EmptyHistoryIsColdStart) {
  const auto m = fit_acceptance_model({}, LearnerSpec{}, 1);
  EXPECT_EQ(m.kind(), AcceptanceModel::Kind::constant);
  EXPECT_DOUBLE_EQ(m.predict({0.3, 0.2, 0.9, false}), 0.5);
  EXPECT_DOUBLE_EQ(cold_start_model().predict({}), 0.5);
}

TEST(AcceptanceModel, SingleClassIsClippedConstant) {
  std::vector<OfferRecord> rows(20, offer(0.5, 0.5, 0.7, true));
  const auto m = fit_acceptance_model(rows, LearnerSpec{}, 1);
  EXPECT_TRUE(m.single_class());
  EXPECT_DOUBLE_EQ(m.predict({0.1, 0.9, 0.5, false}), 0.99);
}

TEST(AcceptanceModel, SeparableHistoryIsLearned) {
  Rng rng(41);
  std::vector<OfferRecord> rows;
  for (int i = 0; i < 600; ++i) {
    const double f = 0.5 + 0.5 * rng.uniform();
    rows.push_back(offer(rng.uniform(), rng.uniform(), f, f > 0.75));
  }
  LearnerSpec spec;
  spec.lambda_per_sample = 1e-3;
  const auto m = fit_acceptance_model(rows, spec, 1);
  int correct = 0;
  for (const auto& r : rows) correct += (m.predict(features_of(r)) > 0.5) == r.accepted;
  EXPECT_GE(correct / static_cast<double>(rows.size()), 0.95);
}

TEST(AcceptanceModel, HeavyPenaltyCollapsesToBaseRate) {
  const auto rows = logistic_history(1000, 43);
  double base = 0.0;
  for (const auto& r : rows) base += r.accepted;
  base /= static_cast<double>(rows.size());
  LearnerSpec spec;
  spec.lambda_per_sample = 1e6;
  const auto m = fit_acceptance_model(rows, spec, 1);
  for (double f : {0.5, 0.75, 1.0}) {
    EXPECT_NEAR(m.predict({0.0, 1.0, f, false}), base, 1e-3);
    EXPECT_NEAR(m.predict({1.0, 0.0, f, false}), base, 1e-3);
  }
}

TEST(AcceptanceModel, InterceptOnlyRecoversRate) {
  std::vector<OfferRecord> rows;
  Rng rng(47);
  for (int i = 0; i < 1000; ++i) rows.push_back(offer(rng.uniform(), rng.uniform(), 0.75, i % 10 < 3));
  LearnerSpec spec;
  spec.kind = LearnerKind::intercept_only;
  const auto m = fit_acceptance_model(rows, spec, 1);
  EXPECT_NEAR(m.predict({0.9, 0.1, 1.0, false}), 0.30, 0.01);
}

TEST(AcceptanceModel, CalibratedOnLogisticGroundTruth) {
  const auto rows = logistic_history(3000, 53);
  HistoryDataset history;
  history.append(rows);
  const auto ens = bootstrap_ensemble(history, 30, LearnerSpec{}, 7);
  double err = 0.0;
  int cells = 0;
  int violations = 0, comparisons = 0;
  for (double s = 0.05; s < 1.0; s += 0.1) {
    for (double vbar = 0.05; vbar < 1.0; vbar += 0.1) {
      double prev = -1.0;
      for (double f = 0.525; f < 1.0; f += 0.05) {
        const double p = ens.estimate({s, vbar, f, false});
        err += std::abs(p - 1.0 / (1.0 + std::exp(-true_logit(s, vbar, f))));
        ++cells;
        if (prev >= 0.0) {
          violations += p < prev;
          ++comparisons;
        }
        prev = p;
      }
    }
  }
  EXPECT_LE(err / cells, 0.05);
  EXPECT_LE(violations, comparisons / 100);
}

TEST(AcceptanceModel, PredictionsStayInsideUnitInterval) {
  const auto rows = logistic_history(500, 59);
  for (auto kind : {LearnerKind::logistic, LearnerKind::mlp, LearnerKind::intercept_only}) {
    LearnerSpec spec;
    spec.kind = kind;
    spec.max_epochs = 300;
    const auto m = fit_acceptance_model(rows, spec, 3);
    for (double s : {0.0, 1.0}) {
      for (double f : {0.5, 1.0}) {
        const double p = m.predict({s, 1.0 - s, f, false});
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
      }
    }
  }
}

TEST(AcceptanceModel, PerceptronLearnsSeparableRule) {
  Rng rng(61);
  std::vector<OfferRecord> rows;
  for (int i = 0; i < 400; ++i) {
    const double f = 0.5 + 0.5 * rng.uniform();
    rows.push_back(offer(rng.uniform(), rng.uniform(), f, f > 0.75));
  }
  LearnerSpec spec;
  spec.kind = LearnerKind::mlp;
  const auto m = fit_acceptance_model(rows, spec, 5);
  EXPECT_EQ(m.kind(), AcceptanceModel::Kind::mlp);
  int correct = 0;
  for (const auto& r : rows) correct += (m.predict(features_of(r)) > 0.5) == r.accepted;
  EXPECT_GE(correct / static_cast<double>(rows.size()), 0.9);
}

TEST(Bootstrap, SizeAndDeterminism) {
  HistoryDataset history;
  history.append(logistic_history(400, 67));
  const auto a = bootstrap_ensemble(history, 100, LearnerSpec{}, 9);
  const auto b = bootstrap_ensemble(history, 100, LearnerSpec{}, 9);
  ASSERT_EQ(a.size(), 100U);
  std::vector<double> da(100), db(100);
  const AcceptanceFeatures x{0.4, 0.6, 0.8, false};
  a.draws(x, da);
  b.draws(x, db);
  EXPECT_EQ(da, db);
  double mean = 0.0;
  for (double d : da) mean += d;
  EXPECT_NEAR(a.estimate(x), mean / 100.0, 1e-12);
}

TEST(Bootstrap, ConstantRowsAndOutcomesGiveZeroSpread) {
  HistoryDataset history;
  history.append(std::vector<OfferRecord>(12, offer(0.5, 0.5, 0.7, true)));
  const auto ens = bootstrap_ensemble(history, 2, LearnerSpec{}, 11);
  std::vector<double> d(2);
  ens.draws({0.2, 0.9, 0.6, false}, d);
  EXPECT_EQ(d[0], d[1]);
}

TEST(Bootstrap, EnsembleMeanOfHandDraws) {
  AcceptanceEnsemble ens({AcceptanceModel::constant(0.2), AcceptanceModel::constant(0.4),
                          AcceptanceModel::constant(0.6)});
  EXPECT_NEAR(ens.estimate({}), 0.4, 1e-15);
}

TEST(ExpectedUtilities, ProductWithDraws) {
  AcceptanceEnsemble ens({AcceptanceModel::constant(0.5), AcceptanceModel::constant(0.7)});
  const std::vector<AcceptanceFeatures> x(3);
  const std::vector<double> u{0.6, 0.0, 0.8};
  const auto eu = predict_expected_utilities(ens, x, u);
  EXPECT_NEAR(eu.draw(0, 0), 0.30, 1e-15);
  EXPECT_NEAR(eu.draw(0, 1), 0.42, 1e-15);
  EXPECT_NEAR(eu.estimate[0], 0.36, 1e-15);
  EXPECT_EQ(eu.draw(1, 0), 0.0);
  EXPECT_EQ(eu.draw(1, 1), 0.0);
  AcceptanceEnsemble half({AcceptanceModel::constant(0.5)});
  EXPECT_NEAR(predict_expected_utilities(half, x, u).estimate[2], 0.4, 1e-15);
}

TEST(History, CsvRoundTrip) {
  HistoryDataset h;
  auto rows = logistic_history(25, 71);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].year = static_cast<int>(i % 4) - 2;
    rows[i].dept_id = static_cast<int>(i % 7);
    rows[i].cand_id = static_cast<int>(i);
  }
  h.append(rows);
  const auto path = std::filesystem::temp_directory_path() / "jobmarket_history_roundtrip.csv";
  {
    std::ofstream f(path);
    write_history_csv(f, h);
  }
  const auto back = read_history_csv(path.string());
  ASSERT_EQ(back.size(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_EQ(back.records[i].year, h.records[i].year);
    EXPECT_EQ(back.records[i].dept_id, h.records[i].dept_id);
    EXPECT_EQ(back.records[i].cand_id, h.records[i].cand_id);
    EXPECT_EQ(back.records[i].accepted, h.records[i].accepted);
    EXPECT_EQ(back.records[i].prestige, h.records[i].prestige);
    EXPECT_EQ(back.records[i].vbar, h.records[i].vbar);
    EXPECT_EQ(back.records[i].alignment, h.records[i].alignment);
  }
  std::filesystem::remove(path);
}
