#include "lerl/evolution.hpp"

#include <algorithm>
#include <optional>

#include "lerl/errors.hpp"
#include "lerl/seed.hpp"

namespace lerl {

void MutationConfig::validate() const {
  if (!(v_part >= 0.0 && v_part <= 1.0)) throw ConfigError("mutation.v_part must lie in [0, 1]");
  if (!(v_range0 > 0.0 && v_range0 < 1.0)) throw ConfigError("mutation.v_range0 must lie in (0, 1)");
  if (!(v_range_decay >= 0.0)) throw ConfigError("mutation.v_range_decay must be non-negative");
  if (!(v_range_min >= 0.0 && v_range_min <= v_range0)) {
    throw ConfigError("mutation.v_range_min must lie in [0, v_range0]");
  }
}

void LineageDecay::validate() const {
  if (!(zeta_m >= 0.0 && zeta_m <= 1.0)) throw ConfigError("decay.zeta_m must lie in [0, 1]");
  if (!(zeta_c >= 0.0 && zeta_c <= 1.0)) throw ConfigError("decay.zeta_c must lie in [0, 1]");
}

std::string to_string(AgentRole role) {
  switch (role) {
    case AgentRole::kElite: return "elite";
    case AgentRole::kGeneral: return "general";
    case AgentRole::kMutant: return "mutant";
    case AgentRole::kCrossover: return "crossover";
    case AgentRole::kIndependent: return "independent";
  }
  return "unknown";
}

AgentRole agent_role_from_string(const std::string& name) {
  for (auto role : {AgentRole::kElite, AgentRole::kGeneral, AgentRole::kMutant,
                    AgentRole::kCrossover, AgentRole::kIndependent}) {
    if (to_string(role) == name) return role;
  }
  throw UsageError("unknown agent role '" + name + "'");
}

double disturbance_amplitude(const MutationConfig& config, std::size_t generation) {
  return std::max(config.v_range0 - static_cast<double>(generation) * config.v_range_decay,
                  config.v_range_min);
}

Eigen::MatrixXd sample_disturbance(Eigen::Index rows, Eigen::Index cols, double v_range,
                                   std::mt19937_64& rng) {
  if (!(v_range >= 0.0 && v_range < 1.0)) throw UsageError("v_range must lie in [0, 1)");
  if (v_range == 0.0) return Eigen::MatrixXd::Ones(rows, cols);
  std::uniform_real_distribution<double> dist(1.0 - v_range, 1.0 + v_range);
  Eigen::MatrixXd v(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) v(r, c) = dist(rng);
  }
  return v;
}

QAgent mutate(const QAgent& parent, const MutationConfig& config, std::size_t generation,
              const LineageDecay& decay, std::mt19937_64& rng, std::uint64_t child_seed) {
  QAgent child = parent.clone_for_evolution(child_seed);
  const double v_range = disturbance_amplitude(config, generation);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& layer : child.online().layers()) {
    if (!(unit(rng) < config.v_part)) continue;
    layer.weights.array() *= sample_disturbance(layer.weights.rows(), layer.weights.cols(), v_range, rng).array();
    layer.bias.array() *= sample_disturbance(layer.bias.size(), 1, v_range, rng).col(0).array();
  }
  child.sync_target();
  child.set_lineage(decay.zeta_m * parent.lineage());
  return child;
}

std::pair<QAgent, QAgent> crossover(const QAgent& first, const QAgent& second,
                                    const LineageDecay& decay, std::uint64_t seed_a,
                                    std::uint64_t seed_b) {
  if (!first.online().same_architecture(second.online())) {
    throw UsageError("crossover parents must share layer shapes and partition index");
  }
  const std::size_t p = first.online().partition_index();
  const auto splice = [p](const LayeredNet& perception_from, const LayeredNet& thinking_from) {
    std::vector<DenseLayer> layers;
    layers.reserve(perception_from.layer_count());
    for (std::size_t i = 0; i < perception_from.layer_count(); ++i) {
      layers.push_back(i < p ? perception_from.layer(i) : thinking_from.layer(i));
    }
    return LayeredNet(std::move(layers), p);
  };

  const double lineage = decay.zeta_c * (first.lineage() + second.lineage()) / 2.0;
  QAgent child_a(splice(second.online(), first.online()), first.config(), seed_a, lineage);
  QAgent child_b(splice(first.online(), second.online()), first.config(), seed_b, lineage);
  return {std::move(child_a), std::move(child_b)};
}

EvolutionResult evolution_step(std::vector<QAgent> population, std::span<const double> raw_scores,
                               const EvolutionParams& params, std::size_t generation,
                               std::uint64_t stream_seed) {
  const std::size_t n = population.size();
  if (raw_scores.size() != n) throw UsageError("one raw score per agent is required");
  params.plan.validate(n);

  std::vector<double> lineages(n);
  for (std::size_t i = 0; i < n; ++i) lineages[i] = population[i].lineage();

  auto evaluation = evaluate_population(raw_scores, lineages, params.weights);
  std::vector<double> gamma(n);
  for (std::size_t i = 0; i < n; ++i) gamma[i] = evaluation.records[i].comprehensive;

  EvolutionResult result;
  result.partition = partition_population(gamma, params.plan);
  result.records = std::move(evaluation.records);
  result.v_range = disturbance_amplitude(params.mutation, generation);
  result.roles.assign(n, AgentRole::kGeneral);
  result.parents.assign(n, {});

  for (std::size_t i = 0; i < n; ++i) population[i].set_lineage(evaluation.updated_lineage[i]);
  for (auto id : result.partition.elite) result.roles[id] = AgentRole::kElite;

  const auto& elite = result.partition.elite;
  const auto pick_one = [&](std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, elite.size() - 1);
    return elite[pick(rng)];
  };
  const auto pick_two = [&](std::mt19937_64& rng) -> std::pair<std::size_t, std::size_t> {
    if (elite.size() == 1) return {elite[0], elite[0]};
    std::uniform_int_distribution<std::size_t> first(0, elite.size() - 1);
    std::uniform_int_distribution<std::size_t> second(0, elite.size() - 2);
    const std::size_t a = first(rng);
    std::size_t b = second(rng);
    if (b >= a) ++b;
    return {elite[a], elite[b]};
  };

  // Children are built from the pre-replacement population; eliminated slots
  // are overwritten only after every child exists.
  std::vector<std::optional<QAgent>> children(n);

  for (auto slot : result.partition.mutation) {
    std::mt19937_64 rng(derive_seed(stream_seed, slot, generation, SlotTag::kMutation));
    const std::size_t parent = pick_one(rng);
    children[slot] = mutate(population[parent], params.mutation, generation, params.decay, rng,
                            derive_seed(stream_seed, slot, generation, SlotTag::kChild));
    result.roles[slot] = AgentRole::kMutant;
    result.parents[slot] = {parent};
  }

  const auto& cross_slots = result.partition.crossover;
  for (std::size_t q = 0; q < cross_slots.size(); q += 2) {
    const std::size_t slot_a = cross_slots[q];
    std::mt19937_64 rng(derive_seed(stream_seed, slot_a, generation, SlotTag::kCrossover));
    const auto [j, k] = pick_two(rng);
    const bool has_mirror = q + 1 < cross_slots.size();
    const std::size_t slot_b = has_mirror ? cross_slots[q + 1] : slot_a;
    auto [child_a, child_b] =
        crossover(population[j], population[k], params.decay,
                  derive_seed(stream_seed, slot_a, generation, SlotTag::kChild),
                  derive_seed(stream_seed, slot_b, generation, SlotTag::kChild));
    children[slot_a] = std::move(child_a);
    result.roles[slot_a] = AgentRole::kCrossover;
    result.parents[slot_a] = {j, k};
    if (has_mirror) {
      children[slot_b] = std::move(child_b);
      result.roles[slot_b] = AgentRole::kCrossover;
      result.parents[slot_b] = {k, j};
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (children[i]) population[i] = std::move(*children[i]);
  }
  result.population = std::move(population);
  return result;
}

}  // namespace lerl
