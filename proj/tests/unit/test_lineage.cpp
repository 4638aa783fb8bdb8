#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "lerl/errors.hpp"
#include "lerl/lineage.hpp"
#include "oracles/oracles.hpp"

namespace lerl {
namespace {

void expect_all_near(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

TEST(NormalizeScores, MinMaps0MaxMaps1) {
  expect_all_near(normalize_scores(std::vector<double>{10, 4, 7, 1}), {1, 1.0 / 3, 2.0 / 3, 0});
}

TEST(NormalizeScores, DegenerateInputIsHalf) {
  expect_all_near(normalize_scores(std::vector<double>{5, 5, 5}), {0.5, 0.5, 0.5}, 0.0);
}

TEST(NormalizeScores, PositiveAffineInvariance) {
  const std::vector<double> x{3, -1, 8, 2.5};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 7.0);
  expect_all_near(normalize_scores(y), normalize_scores(x), 1e-15);
}

TEST(ComprehensiveEvaluation, WeightedSum) {
  expect_all_near(comprehensive_evaluation(std::vector<double>{0.8}, std::vector<double>{0.4}, {0.5, 0.5, 0.5}),
                  {0.6});
  const std::vector<double> rho{0.3, 0.9};
  const auto g = comprehensive_evaluation(rho, std::vector<double>{1.0, 0.2}, {1.0, 0.0, 0.5});
  EXPECT_EQ(g, rho);
  expect_all_near(comprehensive_evaluation(std::vector<double>{1, 0}, std::vector<double>{0, 1}, {0.7, 0.3, 0.5}),
                  {0.7, 0.3});
}

TEST(RankByPerformance, Examples) {
  EXPECT_EQ(rank_by_performance(std::vector<double>{10, 4, 7, 1}), (std::vector<std::size_t>{1, 3, 2, 4}));
  EXPECT_EQ(rank_by_performance(std::vector<double>{5, 5}), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(rank_by_performance(std::vector<double>{42}), (std::vector<std::size_t>{1}));
}

TEST(LineageIncrement, SevenAgentExamples) {
  EXPECT_DOUBLE_EQ(lineage_increment(1, 7), 1.0);
  EXPECT_DOUBLE_EQ(lineage_increment(4, 7), 4.0 / 7.0);
  EXPECT_DOUBLE_EQ(lineage_increment(7, 7), 1.0 / 7.0);
  EXPECT_THROW(lineage_increment(0, 7), UsageError);
}

TEST(LineageUpdate, WorkedExample) {
  // raw = (1.1, 0.95, 1.0, 0.25) -> normalized over [0.25, 1.1]
  const auto phi = lineage_update(std::vector<double>{0.2, 0.9, 0.5, 0.0},
                                  std::vector<std::size_t>{1, 3, 2, 4}, 0.5);
  expect_all_near(phi, {1.0, 0.8235294117647058, 0.8823529411764706, 0.0});
}

TEST(LineageUpdate, ZeroCarryOverDependsOnlyOnRanks) {
  const std::vector<std::size_t> ranks{2, 1, 3};
  const auto a = lineage_update(std::vector<double>{0.9, 0.1, 0.4}, ranks, 0.0);
  const auto b = lineage_update(std::vector<double>{0.0, 1.0, 0.7}, ranks, 0.0);
  EXPECT_EQ(a, b);
  expect_all_near(a, {0.5, 1.0, 0.0});
}

TEST(PartitionPopulation, SevenAgentExample) {
  const std::vector<double> gamma{0.9, 0.1, 0.8, 0.3, 0.2, 0.7, 0.5};
  const auto part = partition_population(gamma, {2, 2, 2, 1});
  EXPECT_EQ(part.elite, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(part.general, (std::vector<std::size_t>{5, 6}));
  EXPECT_EQ(part.mutation, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(part.crossover, (std::vector<std::size_t>{1}));
}

TEST(PartitionPopulation, EqualValuesFollowIdOrder) {
  const std::vector<double> gamma(5, 0.4);
  const auto part = partition_population(gamma, {1, 2, 1, 1});
  EXPECT_EQ(part.elite, (std::vector<std::size_t>{0}));
  EXPECT_EQ(part.general, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(part.mutation, (std::vector<std::size_t>{3}));
  EXPECT_EQ(part.crossover, (std::vector<std::size_t>{4}));
}

TEST(PartitionPopulation, NoEliminatedAgents) {
  const std::vector<double> gamma{0.2, 0.9, 0.5};
  const auto part = partition_population(gamma, {1, 2, 0, 0});
  EXPECT_EQ(part.elite, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(part.mutation.empty());
  EXPECT_TRUE(part.crossover.empty());
}

TEST(PartitionPopulation, PlanMismatchIsConfigError) {
  const std::vector<double> gamma{0.2, 0.9, 0.5};
  EXPECT_THROW(partition_population(gamma, {1, 1, 0, 0}), ConfigError);
  EXPECT_THROW(PartitionPlan({0, 3, 0, 0}).validate(3), ConfigError);
}

TEST(EvaluatePopulation, AllEqualScoresGiveNeutralLineage) {
  const std::vector<double> scores(6, 3.0);
  const std::vector<double> lineage(6, 0.5);
  const auto eval = evaluate_population(scores, lineage, {0.7, 0.3, 0.5});
  for (double phi : eval.updated_lineage) EXPECT_EQ(phi, 0.5);
  for (const auto& r : eval.records) EXPECT_EQ(r.norm_score, 0.5);
}

TEST(EvaluatePopulation, GammaUsesPreUpdateLineage) {
  // If the lineage were updated first, agent 1's gamma would change.
  const std::vector<double> scores{1.0, 0.0};
  const std::vector<double> lineage{0.0, 1.0};
  const EvalWeights w{0.5, 0.5, 0.5};
  const auto eval = evaluate_population(scores, lineage, w);
  EXPECT_DOUBLE_EQ(eval.records[1].comprehensive, 0.5);
  const auto updated_first = comprehensive_evaluation(normalize_scores(scores), eval.updated_lineage, w);
  EXPECT_NE(updated_first[1], eval.records[1].comprehensive);
}

class LineageProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};

  std::vector<double> random_scores(std::size_t n) {
    std::normal_distribution<double> dist(0.0, 50.0);
    std::bernoulli_distribution tie(0.2);
    std::vector<double> s(n);
    for (auto& v : s) v = std::round(dist(rng));
    if (n > 1 && tie(rng)) s[1] = s[0];
    return s;
  }
  std::vector<double> random_unit(std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(n);
    for (auto& v : s) v = u(rng);
    return s;
  }
};

TEST_F(LineageProperties, IncrementMonotoneAndBounded) {
  for (std::size_t n = 1; n <= 16; ++n) {
    for (std::size_t r = 1; r <= n; ++r) {
      const double d = lineage_increment(r, n);
      EXPECT_GT(d, 0.0);
      EXPECT_LE(d, 1.0);
      EXPECT_EQ(d == 1.0, r == 1);
      if (r > 1) EXPECT_GT(lineage_increment(r - 1, n), d);
    }
  }
}

TEST_F(LineageProperties, UpdateRangeExtremesAndOracle) {
  std::uniform_int_distribution<std::size_t> size(2, 16);
  std::uniform_real_distribution<double> zeta(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = size(rng);
    const auto scores = random_scores(n);
    const auto phi = random_unit(n);
    const EvalWeights w{0.6, 0.4, zeta(rng)};
    const auto eval = evaluate_population(scores, phi, w);
    const auto want = oracle::algorithm2(scores, phi, w.w_rho, w.w_phi, w.zeta_o, n, 0, 0, 0);
    const auto [lo, hi] = std::ranges::minmax_element(eval.updated_lineage);
    EXPECT_GE(*lo, 0.0);
    EXPECT_LE(*hi, 1.0);
    if (*lo != *hi) {
      EXPECT_EQ(std::ranges::count(eval.updated_lineage, 1.0), 1);
      EXPECT_EQ(std::ranges::count(eval.updated_lineage, 0.0), 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(eval.updated_lineage[i], want.new_lineage[i], 1e-12);
      EXPECT_NEAR(eval.records[i].comprehensive, want.gamma[i], 1e-12);
    }
  }
}

TEST_F(LineageProperties, AffineTransformKeepsRanksAndPartition) {
  std::uniform_int_distribution<std::size_t> size(2, 16);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = size(rng);
    const auto scores = random_scores(n);
    const auto phi = random_unit(n);
    const double a = std::pow(2.0, std::round(std::log2(scale(rng))));  // exact scaling
    const double b = std::round(scale(rng) * 8.0);
    std::vector<double> shifted;
    for (double s : scores) shifted.push_back(a * s + b);

    EXPECT_EQ(rank_by_performance(scores), rank_by_performance(shifted));
    const EvalWeights w{0.7, 0.3, 0.5};
    const auto e1 = evaluate_population(scores, phi, w);
    const auto e2 = evaluate_population(shifted, phi, w);
    std::vector<double> g1, g2;
    for (std::size_t i = 0; i < n; ++i) {
      g1.push_back(e1.records[i].comprehensive);
      g2.push_back(e2.records[i].comprehensive);
    }
    const std::size_t elite = 1 + n / 4;
    const PartitionPlan plan{elite, n - elite - n / 4, n / 8, n / 4 - n / 8};
    const auto p1 = partition_population(g1, plan);
    const auto p2 = partition_population(g2, plan);
    EXPECT_EQ(p1.elite, p2.elite);
    EXPECT_EQ(p1.general, p2.general);
    EXPECT_EQ(p1.mutation, p2.mutation);
    EXPECT_EQ(p1.crossover, p2.crossover);
    EXPECT_EQ(e1.updated_lineage, e2.updated_lineage);
  }
}

TEST_F(LineageProperties, PartitionIsExhaustiveAndDisjoint) {
  std::uniform_int_distribution<std::size_t> size(2, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = size(rng);
    const auto gamma = random_unit(n);
    std::uniform_int_distribution<std::size_t> split(0, n - 1);
    std::size_t rest = n - 1;
    const std::size_t general = std::min(split(rng), rest);
    rest -= general;
    const std::size_t mutation = rest / 2;
    const PartitionPlan plan{1, general, mutation, rest - mutation};
    const auto part = partition_population(gamma, plan);
    std::set<std::size_t> ids;
    for (const auto* g : {&part.elite, &part.general, &part.mutation, &part.crossover}) ids.insert(g->begin(), g->end());
    EXPECT_EQ(ids.size(), n);
    EXPECT_EQ(*ids.rbegin(), n - 1);
  }
}

}  // namespace
}  // namespace lerl
