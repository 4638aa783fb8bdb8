#include <gtest/gtest.h>

#include <random>

#include "lerl/errors.hpp"
#include "lerl/metrics.hpp"
#include "oracles/oracles.hpp"

namespace lerl {
namespace {

TEST(AggregateCurves, OrderStatistics) {
  const auto c = aggregate_curves({{1}, {5}, {3}}, 5);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].best, 5);
  EXPECT_EQ(c[0].median, 3);
  EXPECT_EQ(c[0].mean, 3);
}

TEST(AggregateCurves, EvenPopulationMedian) {
  const auto c = aggregate_curves({{4}, {1}, {2}, {10}}, 1);
  EXPECT_EQ(c[0].median, 3);
}

TEST(AggregateCurves, WindowOneIsIdentity) {
  const auto c = aggregate_curves({{1, 7, -2, 4}, {3, 0, 8, 1}}, 1);
  for (const auto& p : c) EXPECT_EQ(p.smoothed_mean, p.mean);
}

TEST(AggregateCurves, TrailingAverage) {
  const auto c = aggregate_curves({{1, 2, 3, 4}}, 2);
  const std::vector<double> want{1, 1.5, 2.5, 3.5};
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(c[t].smoothed_mean, want[t]);
}

TEST(AggregateCurves, BadInput) {
  EXPECT_THROW(aggregate_curves({}, 1), UsageError);
  EXPECT_THROW(aggregate_curves({{1, 2}, {3}}, 1), UsageError);
  EXPECT_THROW(aggregate_curves({{1}}, 0), UsageError);
}

TEST(AggregateCurves, MatchesBruteForceExactly) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> agents(1, 9), iters(1, 40), window(1, 8);
  std::normal_distribution<double> score(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    ScoreMatrix m(agents(rng), std::vector<double>(iters(rng)));
    for (auto& row : m) {
      for (auto& v : row) v = score(rng);
    }
    const std::size_t w = window(rng);
    const auto got = aggregate_curves(m, w);
    const auto want = oracle::curves(m, w);
    for (std::size_t t = 0; t < got.size(); ++t) {
      EXPECT_EQ(got[t].best, want[t].best);
      EXPECT_EQ(got[t].median, want[t].median);
      EXPECT_EQ(got[t].mean, want[t].mean);
      EXPECT_EQ(got[t].smoothed_mean, want[t].smoothed);
      EXPECT_GE(got[t].best, got[t].median);
      EXPECT_GE(got[t].best, got[t].mean);
    }
  }
}

TEST(GrowthRate, Examples) {
  const auto r = growth_rate(std::vector<double>{10, 12, 12});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(*r[0], 1.2);
  EXPECT_EQ(*r[1], 1.0);
  for (const auto& x : growth_rate(std::vector<double>(6, 4.5))) EXPECT_EQ(*x, 1.0);
  const auto z = growth_rate(std::vector<double>{0, 5});
  ASSERT_EQ(z.size(), 1u);
  EXPECT_FALSE(z[0].has_value());
}

std::vector<IterationRecord> iteration_log(const ScoreMatrix& m) {
  std::vector<IterationRecord> log;
  for (std::size_t t = 0; t < m[0].size(); ++t) {
    for (std::size_t a = 0; a < m.size(); ++a) log.push_back({t, a, 0.0, m[a][t], 0.0});
  }
  return log;
}

std::vector<GenerationRecord> generation_log(const std::vector<std::vector<double>>& per_gen) {
  std::vector<GenerationRecord> log;
  for (std::size_t g = 0; g < per_gen.size(); ++g) {
    for (std::size_t a = 0; a < per_gen[g].size(); ++a) {
      GenerationRecord r;
      r.generation = g;
      r.agent_id = a;
      r.raw_score = per_gen[g][a];
      log.push_back(r);
    }
  }
  return log;
}

TEST(ScoreMatrix, RebuildsFromLog) {
  const ScoreMatrix m{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(score_matrix(iteration_log(m)), m);
  auto partial = iteration_log(m);
  partial.pop_back();
  EXPECT_THROW(score_matrix(partial), UsageError);
}

TEST(BestPerGeneration, MaxOfRawScores) {
  EXPECT_EQ(best_per_generation(generation_log({{1, -3, 2}, {-1, -2, -5}})), (std::vector<double>{2, -1}));
}

TEST(Summarize, TrapezoidArea) {
  const auto c = aggregate_curves({{0, 2, 4}}, 1);
  const auto s = summarize("x", c);
  EXPECT_EQ(s.mean_auc, 4.0);
  EXPECT_EQ(s.final_best, 4.0);
  EXPECT_EQ(s.final_median, 4.0);
}

TEST(ComparativeReport, SelfComparisonIsOne) {
  const ScoreMatrix m{{1, 2, 3, 4}, {2, 2, 5, 1}};
  const auto gens = generation_log({{2, 2}, {5, 4}});
  const auto r = comparative_report(iteration_log(m), gens, iteration_log(m), gens, 2);
  for (const auto& x : r.best_ratio) EXPECT_EQ(*x, 1.0);
  EXPECT_EQ(r.lerl_summary.mean_auc, r.baseline_summary.mean_auc);
}

TEST(ComparativeReport, BaselineBetterGivesRatiosBelowOne) {
  const ScoreMatrix m{{1, 2}};
  const auto r = comparative_report(iteration_log(m), generation_log({{1}, {2}, {3}}), iteration_log(m),
                                    generation_log({{2}, {3}, {4}}), 1);
  for (const auto& x : r.best_ratio) EXPECT_LT(*x, 1.0);
}

TEST(ComparativeReport, RatioRisesThenFalls) {
  // LERL pulls ahead early, the baseline catches up as both converge.
  const ScoreMatrix m{{1, 2}};
  const auto r = comparative_report(iteration_log(m), generation_log({{1}, {3}, {6}, {8}, {9}}), iteration_log(m),
                                    generation_log({{1}, {2}, {3}, {5}, {8}}), 1);
  std::vector<double> ratio;
  for (const auto& x : r.best_ratio) ratio.push_back(*x);
  const auto peak = std::ranges::max_element(ratio) - ratio.begin();
  EXPECT_GT(peak, 0);
  EXPECT_LT(peak, static_cast<std::ptrdiff_t>(ratio.size()) - 1);
  for (std::ptrdiff_t g = 1; g <= peak; ++g) EXPECT_GT(ratio[g], ratio[g - 1]);
  for (std::size_t g = static_cast<std::size_t>(peak) + 1; g < ratio.size(); ++g) EXPECT_LT(ratio[g], ratio[g - 1]);
}

TEST(ComparativeReport, ZeroBaselineBestIsUndefined) {
  const ScoreMatrix m{{1}};
  const auto r = comparative_report(iteration_log(m), generation_log({{1}}), iteration_log(m), generation_log({{0}}), 1);
  EXPECT_FALSE(r.best_ratio[0].has_value());
}

TEST(ComparativeReport, LengthMismatchRejected) {
  EXPECT_THROW(comparative_report(iteration_log({{1, 2}}), generation_log({{1}}), iteration_log({{1}}),
                                  generation_log({{1}}), 1),
               UsageError);
}

}  // namespace
}  // namespace lerl
