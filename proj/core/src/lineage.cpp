#include "lerl/lineage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lerl/errors.hpp"

namespace lerl {
namespace {

std::vector<std::size_t> order_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

}  // namespace

void EvalWeights::validate() const {
  if (!(w_rho >= 0.0) || !(w_phi >= 0.0)) throw ConfigError("lineage weights must be non-negative");
  if (std::abs(w_rho + w_phi - 1.0) > 1e-9) throw ConfigError("lineage.w_rho + lineage.w_phi must equal 1");
  if (!(zeta_o >= 0.0 && zeta_o <= 1.0)) throw ConfigError("lineage.zeta_o must lie in [0, 1]");
}

void PartitionPlan::validate(std::size_t population_size) const {
  if (n_elite < 1) throw ConfigError("partition plan needs at least one elite agent");
  if (total() != population_size) {
    throw ConfigError("partition plan covers " + std::to_string(total()) +
                      " agents but the population has " + std::to_string(population_size));
  }
}

std::vector<double> normalize_scores(std::span<const double> raw) {
  if (raw.empty()) return {};
  const auto [lo, hi] = std::ranges::minmax_element(raw);
  const double min = *lo;
  const double max = *hi;
  std::vector<double> out(raw.size(), 0.5);
  if (max == min) return out;
  const double range = max - min;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - min) / range;
  return out;
}

std::vector<double> comprehensive_evaluation(std::span<const double> norm_scores,
                                             std::span<const double> lineages,
                                             const EvalWeights& weights) {
  if (norm_scores.size() != lineages.size()) throw UsageError("score and lineage counts differ");
  std::vector<double> out(norm_scores.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = weights.w_rho * norm_scores[i] + weights.w_phi * lineages[i];
  }
  return out;
}

std::vector<std::size_t> rank_by_performance(std::span<const double> raw_scores) {
  const auto order = order_descending(raw_scores);
  std::vector<std::size_t> ranks(raw_scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
  return ranks;
}

std::vector<std::size_t> shared_ranks(std::span<const double> raw_scores) {
  std::vector<std::size_t> ranks(raw_scores.size(), 1);
  for (std::size_t i = 0; i < raw_scores.size(); ++i) {
    for (std::size_t j = 0; j < raw_scores.size(); ++j) {
      if (raw_scores[j] > raw_scores[i]) ++ranks[i];
    }
  }
  return ranks;
}

double lineage_increment(std::size_t rank, std::size_t population_size) {
  if (rank < 1 || rank > population_size) throw UsageError("rank outside [1, population size]");
  return static_cast<double>(population_size - rank + 1) / static_cast<double>(population_size);
}

std::vector<double> lineage_update(std::span<const double> old_lineage,
                                   std::span<const std::size_t> ranks, double zeta_o) {
  if (old_lineage.size() != ranks.size()) throw UsageError("lineage and rank counts differ");
  std::vector<double> raw(ranks.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = lineage_increment(ranks[i], ranks.size()) + old_lineage[i] * zeta_o;
  }
  return normalize_scores(raw);
}

Partition partition_population(std::span<const double> comprehensive, const PartitionPlan& plan) {
  if (plan.total() != comprehensive.size()) {
    throw ConfigError("partition plan does not match the population size");
  }
  const auto order = order_descending(comprehensive);
  Partition part;
  auto it = order.begin();
  const auto take = [&](std::vector<std::size_t>& group, std::size_t count) {
    group.assign(it, it + static_cast<std::ptrdiff_t>(count));
    it += static_cast<std::ptrdiff_t>(count);
  };
  take(part.elite, plan.n_elite);
  take(part.general, plan.n_general);
  take(part.mutation, plan.n_mutation);
  take(part.crossover, plan.n_crossover);
  return part;
}

PopulationEvaluation evaluate_population(std::span<const double> raw_scores,
                                         std::span<const double> lineages,
                                         const EvalWeights& weights) {
  if (raw_scores.size() != lineages.size()) throw UsageError("score and lineage counts differ");
  const auto norm = normalize_scores(raw_scores);
  const auto gamma = comprehensive_evaluation(norm, lineages, weights);
  const auto ranks = rank_by_performance(raw_scores);

  PopulationEvaluation result;
  result.records.resize(raw_scores.size());
  for (std::size_t i = 0; i < raw_scores.size(); ++i) {
    result.records[i] = EvalRecord{i, raw_scores[i], norm[i], lineages[i], gamma[i], ranks[i]};
  }
  result.updated_lineage = lineage_update(lineages, shared_ranks(raw_scores), weights.zeta_o);
  return result;
}

}  // namespace lerl
