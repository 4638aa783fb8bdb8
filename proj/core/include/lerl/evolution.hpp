#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lerl/dqn.hpp"
#include "lerl/lineage.hpp"

namespace lerl {

struct MutationConfig {
  double v_part = 0.5;           // per-layer disturbance probability
  double v_range0 = 0.2;         // initial disturbance half-width
  double v_range_decay = 0.004;  // linear decay per generation
  double v_range_min = 0.05;     // floor

  void validate() const;
};

struct LineageDecay {
  double zeta_m = 0.9;  // mutation inheritance
  double zeta_c = 0.9;  // crossover inheritance

  void validate() const;
};

enum class AgentRole { kElite, kGeneral, kMutant, kCrossover, kIndependent };

std::string to_string(AgentRole role);
AgentRole agent_role_from_string(const std::string& name);

/// max(v_range0 - generation * v_range_decay, v_range_min).
double disturbance_amplitude(const MutationConfig& config, std::size_t generation);

/// rows x cols matrix with i.i.d. entries from U(1 - v_range, 1 + v_range).
Eigen::MatrixXd sample_disturbance(Eigen::Index rows, Eigen::Index cols, double v_range,
                                   std::mt19937_64& rng);

/// Child of `parent` whose layers are each, with probability v_part, multiplied
/// elementwise (weights and bias together) by a fresh disturbance. The child
/// starts with an empty buffer, target = online, and lineage zeta_m * parent's.
QAgent mutate(const QAgent& parent, const MutationConfig& config, std::size_t generation,
              const LineageDecay& decay, std::mt19937_64& rng, std::uint64_t child_seed);

/// Block crossover. The first child pairs `second`'s perception block with
/// `first`'s thinking block; the second child is the mirror combination.
/// Both inherit zeta_c times the parents' mean lineage.
/// Throws UsageError if the parents' architectures differ.
std::pair<QAgent, QAgent> crossover(const QAgent& first, const QAgent& second,
                                    const LineageDecay& decay, std::uint64_t seed_a,
                                    std::uint64_t seed_b);

struct EvolutionParams {
  PartitionPlan plan;
  EvalWeights weights;
  MutationConfig mutation;
  LineageDecay decay;
};

struct EvolutionResult {
  std::vector<QAgent> population;
  std::vector<EvalRecord> records;               // evaluation that drove this step, by slot
  std::vector<AgentRole> roles;                  // role of the agent now in each slot
  std::vector<std::vector<std::size_t>> parents; // parent slots for evolved children
  Partition partition;
  double v_range = 0.0;
};

/// One generation of lineage-aware evolution:
///   normalize scores -> comprehensive value -> lineage update -> partition
///   -> refill mutation slots from mutated elites and crossover slots from
///      crossed elite pairs.
/// Elite and general agents are moved through untouched apart from their new
/// lineage. Each evolved slot draws from its own stream derived from
/// (stream_seed, slot, generation), so results do not depend on fill order.
EvolutionResult evolution_step(std::vector<QAgent> population, std::span<const double> raw_scores,
                               const EvolutionParams& params, std::size_t generation,
                               std::uint64_t stream_seed);

}  // namespace lerl
