#pragma once

#include <cstdint>

namespace lerl {

/// Purpose of a derived RNG stream. Distinct tags give independent streams for
/// the same (agent, generation) pair.
enum class SlotTag : std::uint32_t {
  kInit = 1,       // network weight initialization
  kTrain = 2,      // agent exploration + replay sampling
  kEnv = 3,        // training environment stochasticity
  kEval = 4,       // greedy evaluation episodes
  kMutation = 5,   // parent pick + disturbance for a mutation slot
  kCrossover = 6,  // parent pick for a crossover slot
  kChild = 7,      // fresh stream handed to an evolved child
};

/// 64-bit hash of (master_seed, agent_id, generation, tag). Every step of the
/// mix is a bijection, so varying one coordinate with the others fixed never collides.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t agent_id,
                          std::uint64_t generation, SlotTag tag) noexcept;

}  // namespace lerl
