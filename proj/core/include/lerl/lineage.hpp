#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lerl {

/// Weights of the comprehensive evaluation and the lineage carry-over factor.
struct EvalWeights {
  double w_rho = 0.7;   // current (normalized) performance
  double w_phi = 0.3;   // lineage
  double zeta_o = 0.5;  // how much old lineage survives an update

  /// Throws ConfigError unless both weights are non-negative and sum to 1.
  void validate() const;
};

/// Sizes of the four groups the population is split into before evolution.
struct PartitionPlan {
  std::size_t n_elite = 1;
  std::size_t n_general = 0;
  std::size_t n_mutation = 0;
  std::size_t n_crossover = 0;

  std::size_t total() const noexcept { return n_elite + n_general + n_mutation + n_crossover; }
  std::size_t eliminated() const noexcept { return n_mutation + n_crossover; }
  /// Throws ConfigError unless the plan covers exactly `population_size` agents with >= 1 elite.
  void validate(std::size_t population_size) const;
};

struct EvalRecord {
  std::size_t agent_id = 0;
  double raw_score = 0.0;
  double norm_score = 0.0;
  double lineage = 0.0;        // the value that entered `comprehensive`
  double comprehensive = 0.0;  // w_rho * norm_score + w_phi * lineage
  std::size_t rank = 1;        // by raw score, 1 = best
};

/// Min-max normalization to [0, 1]. If every entry is equal the result is 0.5 everywhere.
std::vector<double> normalize_scores(std::span<const double> raw);

/// Elementwise w_rho * norm + w_phi * lineage.
std::vector<double> comprehensive_evaluation(std::span<const double> norm_scores,
                                             std::span<const double> lineages,
                                             const EvalWeights& weights);

/// Ranks 1..n by descending raw score; equal scores rank the lower agent id first.
std::vector<std::size_t> rank_by_performance(std::span<const double> raw_scores);

/// Ranks for the lineage increment: tied scores share the best rank among
/// them (1, 2, 2, 4 style), so equally performing agents gain equal lineage.
std::vector<std::size_t> shared_ranks(std::span<const double> raw_scores);

/// (n - rank + 1) / n: 1 for the best agent, 1/n for the worst.
double lineage_increment(std::size_t rank, std::size_t population_size);

/// New lineage: min-max normalization of lineage_increment(rank) + zeta_o * old.
/// Must run after the comprehensive evaluation that consumed `old_lineage`.
std::vector<double> lineage_update(std::span<const double> old_lineage,
                                   std::span<const std::size_t> ranks, double zeta_o);

struct Partition {
  std::vector<std::size_t> elite;
  std::vector<std::size_t> general;
  std::vector<std::size_t> mutation;
  std::vector<std::size_t> crossover;
};

/// Orders agents by descending comprehensive value (ties: lower id first) and
/// slices the order into elite, general, mutation and crossover groups.
Partition partition_population(std::span<const double> comprehensive, const PartitionPlan& plan);

struct PopulationEvaluation {
  std::vector<EvalRecord> records;        // indexed by agent id
  std::vector<double> updated_lineage;    // lineage after this generation's update
};

/// Normalize, score, rank and update lineage in the required order.
PopulationEvaluation evaluate_population(std::span<const double> raw_scores,
                                         std::span<const double> lineages,
                                         const EvalWeights& weights);

}  // namespace lerl
