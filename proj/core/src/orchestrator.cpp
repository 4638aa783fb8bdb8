#include "lerl/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "lerl/errors.hpp"
#include "lerl/evaluate.hpp"
#include "lerl/seed.hpp"

namespace lerl {

void PopulationConfig::validate() const {
  if (population_size < 1) throw ConfigError("population.size must be at least 1");
  plan.validate(population_size);
  if (evolution_cycle < 1) throw ConfigError("population.evolution_cycle must be at least 1");
  if (total_iterations < 1) throw ConfigError("population.total_iterations must be at least 1");
  if (iteration_steps < 1) throw ConfigError("population.iteration_steps must be at least 1");
  if (eval_episodes < 1) throw ConfigError("population.eval_episodes must be at least 1");
  weights.validate();
  mutation.validate();
  decay.validate();
  dqn.validate();
  switch (env.kind) {
    case EnvKind::kGridWorld:
      if (env.side < 2) throw ConfigError("env.side must be at least 2");
      break;
    case EnvKind::kChainWalk:
      if (env.length < 3) throw ConfigError("env.length must be at least 3");
      if (!(env.slip_probability >= 0.0 && env.slip_probability < 1.0)) {
        throw ConfigError("env.slip_probability must lie in [0, 1)");
      }
      break;
  }
}

std::size_t PopulationConfig::worker_count() const noexcept {
  const std::size_t w = workers == 0 ? population_size : workers;
  return std::clamp<std::size_t>(w, 1, population_size);
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

RunResult run_population(const PopulationConfig& config, bool evolve, RunSink* sink,
                         const RunHooks& hooks) {
  config.validate();
  const std::size_t n = config.population_size;
  const std::uint64_t master = config.master_seed;
  const EnvSpec spec = env_spec(config.env);

  RunResult result;
  result.population.reserve(n);
  std::vector<std::unique_ptr<Environment>> envs;
  envs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.population.push_back(QAgent::create(spec, config.dqn,
                                               derive_seed(master, i, 0, SlotTag::kInit),
                                               derive_seed(master, i, 0, SlotTag::kTrain)));
    envs.push_back(make_environment(config.env, derive_seed(master, i, 0, SlotTag::kEnv)));
  }

  const EvolutionParams params = config.evolution_params();
  std::size_t iteration = 0;
  std::size_t generation = 0;
  while (iteration < config.total_iterations) {
    const std::size_t cycle = std::min(config.evolution_cycle, config.total_iterations - iteration);
    std::vector<std::vector<IterationRecord>> per_agent(n);

    auto train_agent = [&](std::size_t id) {
      QAgent& agent = result.population[id];
      auto& records = per_agent[id];
      records.reserve(cycle);
      for (std::size_t k = 0; k < cycle; ++k) {
        const std::size_t it = iteration + k;
        const IterationStats stats = agent.run_iteration(*envs[id], config.iteration_steps);
        const double score = evaluate_deterministic(config.env, agent.online(), config.eval_episodes,
                                                    derive_seed(master, id, it, SlotTag::kEval));
        records.push_back({it, id, stats.mean_return, score, agent.epsilon()});
      }
      if (hooks.cycle_complete) hooks.cycle_complete(id, generation, iteration + cycle);
    };

    std::exception_ptr failure;
    try {
      parallel_for(n, config.worker_count(), train_agent);
    } catch (...) {
      failure = std::current_exception();
    }

    // Barrier passed (or aborted): canonicalize by (iteration, agent_id).
    std::vector<IterationRecord> cycle_records;
    cycle_records.reserve(n * cycle);
    for (std::size_t k = 0; k < cycle; ++k) {
      for (std::size_t id = 0; id < n; ++id) {
        if (k < per_agent[id].size()) cycle_records.push_back(per_agent[id][k]);
      }
    }
    if (sink) sink->on_iterations(cycle_records);
    result.iterations.insert(result.iterations.end(), cycle_records.begin(), cycle_records.end());
    if (failure) std::rethrow_exception(failure);

    iteration += cycle;
    if (cycle < config.evolution_cycle) break;  // trailing partial cycle: trained, not evolved

    std::vector<double> raw(n);
    for (std::size_t id = 0; id < n; ++id) raw[id] = per_agent[id].back().eval_score;

    if (hooks.evolution_begin) hooks.evolution_begin(generation);

    std::vector<GenerationRecord> gen_records(n);
    if (evolve) {
      EvolutionResult step =
          evolution_step(std::move(result.population), raw, params, generation, master);
      for (std::size_t id = 0; id < n; ++id) {
        const EvalRecord& r = step.records[id];
        gen_records[id] = {generation, id, r.raw_score, r.norm_score, r.lineage,
                           r.comprehensive, r.rank, step.roles[id], step.v_range};
      }
      result.population = std::move(step.population);
      ++result.evolution_steps;
    } else {
      std::vector<double> lineages(n);
      for (std::size_t id = 0; id < n; ++id) lineages[id] = result.population[id].lineage();
      auto evaluation = evaluate_population(raw, lineages, config.weights);
      for (std::size_t id = 0; id < n; ++id) {
        const EvalRecord& r = evaluation.records[id];
        gen_records[id] = {generation, id, r.raw_score, r.norm_score, r.lineage,
                           r.comprehensive, r.rank, AgentRole::kIndependent, 0.0};
        result.population[id].set_lineage(evaluation.updated_lineage[id]);
      }
    }
    if (sink) sink->on_generation(gen_records);
    result.generations.insert(result.generations.end(), gen_records.begin(), gen_records.end());
    ++generation;
  }
  return result;
}

}  // namespace

RunResult run_lerl(const PopulationConfig& config, RunSink* sink, const RunHooks& hooks) {
  return run_population(config, true, sink, hooks);
}

RunResult run_baseline(const PopulationConfig& config, RunSink* sink, const RunHooks& hooks) {
  return run_population(config, false, sink, hooks);
}

}  // namespace lerl
