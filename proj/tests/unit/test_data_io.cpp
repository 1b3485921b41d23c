#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jobmarket/config.hpp"
#include "jobmarket/dataset.hpp"
#include "jobmarket/error.hpp"

using namespace jobmarket;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("jobmarket_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

}  // namespace

TEST(GenerateDepartments, DefaultSizeAndPrestigeRange) {
  const auto d = generate_departments(103, 15, 1);
  ASSERT_EQ(d.size(), 103U);
  EXPECT_DOUBLE_EQ(d.front().prestige, 1.0);
  EXPECT_DOUBLE_EQ(d.back().prestige, 0.0);
  for (std::size_t j = 1; j < d.size(); ++j) EXPECT_LE(d[j].prestige, d[j - 1].prestige);
  for (const auto& x : d) {
    EXPECT_EQ(x.attributes.size(), 15U);
    double w = 0.0;
    for (double v : x.utility_weights) w += v;
    EXPECT_NEAR(w, 1.0, 1e-12);
  }
}

TEST(GenerateDepartments, SingleDepartmentHasFullPrestige) {
  const auto d = generate_departments(1, 4, 2);
  ASSERT_EQ(d.size(), 1U);
  EXPECT_DOUBLE_EQ(d[0].prestige, 1.0);
}

TEST(GenerateDepartments, SameSeedSameFile) {
  std::ostringstream a, b, c;
  write_departments_csv(a, generate_departments(30, 6, 5));
  write_departments_csv(b, generate_departments(30, 6, 5));
  write_departments_csv(c, generate_departments(30, 6, 6));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}

TEST_F(TempDir, CsvRoundTripReproducesProfiles) {
  const auto d = generate_departments(40, 15, 9);
  std::ostringstream s;
  write_departments_csv(s, d);
  const auto back = load_departments(write("d.csv", s.str()));
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    EXPECT_EQ(back[j].id, d[j].id);
    EXPECT_EQ(back[j].name, d[j].name);
    EXPECT_EQ(back[j].region, d[j].region);
    EXPECT_EQ(back[j].prestige, d[j].prestige);
    EXPECT_EQ(back[j].attributes, d[j].attributes);
    EXPECT_EQ(back[j].utility_weights, d[j].utility_weights);
    EXPECT_EQ(back[j].capacity, d[j].capacity);
  }
}

TEST_F(TempDir, PeerScoresAreMinMaxMapped) {
  const auto d = load_departments(write("d.csv",
                                        "id,peer_score,attr_1,attr_2\n"
                                        "2,4.0,0.1,0.2\n"
                                        "0,2.0,0.3,0.4\n"
                                        "1,3.0,0.5,0.6\n"));
  ASSERT_EQ(d.size(), 3U);
  EXPECT_DOUBLE_EQ(d[0].prestige, 0.0);
  EXPECT_DOUBLE_EQ(d[1].prestige, 0.5);
  EXPECT_DOUBLE_EQ(d[2].prestige, 1.0);
  EXPECT_EQ(d[2].attributes, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(d[0].utility_weights.size(), 3U);
  EXPECT_EQ(d[0].capacity, 5);
}

TEST_F(TempDir, OutOfRangeAttributesAreNormalized) {
  const auto d = load_departments(write("d.csv",
                                        "id,peer_score,attr_1\n"
                                        "0,1,10\n"
                                        "1,2,20\n"
                                        "2,3,15\n"));
  EXPECT_DOUBLE_EQ(d[0].attributes[0], 0.0);
  EXPECT_DOUBLE_EQ(d[1].attributes[0], 1.0);
  EXPECT_DOUBLE_EQ(d[2].attributes[0], 0.5);
}

TEST_F(TempDir, NonNumericPeerScoreNamesTheRow) {
  const auto path = write("d.csv",
                          "id,peer_score,attr_1\n"
                          "0,2.0,0.1\n"
                          "1,n/a,0.2\n");
  try {
    load_departments(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2U);
    EXPECT_EQ(e.column(), "peer_score");
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST_F(TempDir, MissingColumnsAreReported) {
  EXPECT_THROW(load_departments(write("a.csv", "id,attr_1\n0,0.1\n")), ParseError);
  EXPECT_THROW(load_departments(write("b.csv", "id,peer_score\n0,1\n")), ParseError);
  EXPECT_THROW(load_departments(write("c.csv", "id,peer_score,attr_1\n0,1\n")), ParseError);
  EXPECT_THROW(load_departments((dir_ / "missing.csv").string()), ParseError);
}

TEST_F(TempDir, ConfigFileWithSectionsListsAndComments) {
  RunOptions o;
  load_config_file(write("run.cfg",
                         "# desk-scale run\n"
                         "[market]\n"
                         "m = 50\n"
                         "tier_boundaries = [5, 12, 25]\n"
                         "seed = 12345  # fixed\n"
                         "[learner]\n"
                         "learner = \"mlp\"\n"
                         "lambda = 0.5\n"
                         "[run]\n"
                         "mechanism = aea\n"
                         "reps = 7\n"
                         "bootstrap = 40\n"),
                   o);
  EXPECT_EQ(o.market.m, 50);
  EXPECT_EQ(o.market.tier_boundaries, (std::vector<int>{5, 12, 25}));
  EXPECT_EQ(o.market.seed, 12345U);
  EXPECT_EQ(o.market.learner, LearnerKind::mlp);
  EXPECT_DOUBLE_EQ(o.market.lambda, 0.5);
  EXPECT_EQ(o.mechanism, "aea");
  EXPECT_EQ(o.market.replications, 7);
  EXPECT_EQ(o.market.B, 40);
}

TEST_F(TempDir, ConfigErrorsCarryLineNumbers) {
  RunOptions o;
  try {
    load_config_file(write("bad.cfg", "m = 10\nnot_a_key = 3\n"), o);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2U);
  }
  EXPECT_THROW(load_config_file((dir_ / "nope.cfg").string(), o), ParseError);
}

TEST(Settings, EveryKeyIsSettableAndDescribed) {
  RunOptions o;
  const auto described = describe(o);
  ASSERT_EQ(described.size(), setting_keys().size());
  for (const auto& [key, value] : described) {
    RunOptions copy;
    EXPECT_NO_THROW(apply_setting(copy, key, value)) << key << " = " << value;
    EXPECT_EQ(describe(copy), described) << key;
  }
}

TEST(Settings, BadValuesThrowConfigError) {
  RunOptions o;
  EXPECT_THROW(apply_setting(o, "m", "many"), ConfigError);
  EXPECT_THROW(apply_setting(o, "rho", "0.5x"), ConfigError);
  EXPECT_THROW(apply_setting(o, "learner", "forest"), ConfigError);
  EXPECT_THROW(apply_setting(o, "unknown", "1"), ConfigError);
  apply_setting(o, "rho", "1.5");
  EXPECT_THROW(o.market.validate(), ConfigError);
}

TEST(Settings, TierBoundariesMustFitDepartments) {
  MarketConfig cfg;
  cfg.m = 40;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.tier_boundaries = {5, 10};
  EXPECT_NO_THROW(cfg.validate());
}
