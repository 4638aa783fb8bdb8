#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lerl/dqn.hpp"
#include "lerl/env.hpp"
#include "lerl/evolution.hpp"
#include "lerl/lineage.hpp"

namespace lerl {

struct PopulationConfig {
  std::size_t population_size = 7;
  PartitionPlan plan{2, 2, 2, 1};
  std::size_t evolution_cycle = 5;     // iterations per generation
  std::size_t total_iterations = 200;
  std::size_t iteration_steps = 1000;  // env steps per iteration
  std::size_t eval_episodes = 10;
  EvalWeights weights;
  MutationConfig mutation;
  LineageDecay decay;
  DqnConfig dqn;
  EnvConfig env;
  std::uint64_t master_seed = 0;
  std::size_t workers = 0;  // 0 = one per agent

  /// Throws ConfigError on the first violated constraint.
  void validate() const;
  EvolutionParams evolution_params() const { return {plan, weights, mutation, decay}; }
  std::size_t worker_count() const noexcept;
};

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t agent_id = 0;
  double train_return = 0.0;
  double eval_score = 0.0;
  double epsilon = 0.0;
};

struct GenerationRecord {
  std::size_t generation = 0;
  std::size_t agent_id = 0;
  double raw_score = 0.0;
  double norm_score = 0.0;
  double lineage = 0.0;
  double gamma_value = 0.0;
  std::size_t rank = 1;
  AgentRole role = AgentRole::kGeneral;
  double v_range = 0.0;
};

/// Receives canonically ordered log records as soon as a generation finishes.
class RunSink {
 public:
  virtual ~RunSink() = default;
  virtual void on_iterations(std::span<const IterationRecord> records) = 0;
  virtual void on_generation(std::span<const GenerationRecord> records) = 0;
};

/// Instrumentation points. `cycle_complete` fires on the worker thread that
/// trained the agent; `evolution_begin` fires on the coordinating thread
/// after the barrier and before any agent is scored or replaced.
struct RunHooks {
  std::function<void(std::size_t agent_id, std::size_t generation, std::size_t iterations_done)>
      cycle_complete;
  std::function<void(std::size_t generation)> evolution_begin;
};

struct RunResult {
  std::vector<IterationRecord> iterations;   // ordered by (iteration, agent_id)
  std::vector<GenerationRecord> generations; // ordered by (generation, agent_id)
  std::vector<QAgent> population;            // final agents
  std::size_t evolution_steps = 0;
};

/// Population training with lineage evolution after every full cycle.
RunResult run_lerl(const PopulationConfig& config, RunSink* sink = nullptr,
                   const RunHooks& hooks = {});

/// Same agents, seeds and budget, trained independently with no evolution.
/// Generation records are still emitted (role "independent") for comparison.
RunResult run_baseline(const PopulationConfig& config, RunSink* sink = nullptr,
                       const RunHooks& hooks = {});

/// Runs fn(0..count-1) on up to `workers` threads and rethrows the first failure
/// after all threads have joined.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace lerl
