#include <benchmark/benchmark.h>

#include <random>

#include "lerl/dqn.hpp"
#include "lerl/env.hpp"
#include "lerl/evolution.hpp"

namespace {

using namespace lerl;

void BM_Forward(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const std::vector<std::size_t> sizes{25, width, width, 4};
  const auto net = LayeredNet::initialize(sizes, 1, rng);
  std::vector<double> x(25, 0.0);
  x[3] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(256);

void BM_TrainStep(benchmark::State& state) {
  DqnConfig cfg;
  cfg.batch_size = static_cast<std::size_t>(state.range(0));
  cfg.warmup_steps = cfg.batch_size;
  GridWorld env(5);
  QAgent agent = QAgent::create(env.spec(), cfg, 1, 2);
  auto obs = env.reset();
  for (std::size_t i = 0; i < 2000; ++i) {
    const std::size_t a = i % 4;
    auto r = env.step(a);
    agent.remember({obs, a, r.reward, r.next_observation, r.terminal});
    obs = r.terminal || r.truncated ? env.reset() : r.next_observation;
  }
  for (auto _ : state) benchmark::DoNotOptimize(agent.train_step());
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(128);

void BM_EnvIteration(benchmark::State& state) {
  GridWorld env(5);
  QAgent agent = QAgent::create(env.spec(), DqnConfig{}, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(agent.run_iteration(env, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_EnvIteration);

void BM_EvolutionStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const EnvSpec spec{19, 2, 76, 0.99};
  std::vector<QAgent> pop;
  std::vector<double> scores;
  for (std::size_t i = 0; i < n; ++i) {
    pop.push_back(QAgent::create(spec, DqnConfig{}, i + 1, i + 1));
    scores.push_back(static_cast<double>((i * 7) % n));
  }
  EvolutionParams params;
  params.plan = {2, n - 5, 2, 1};
  std::size_t generation = 0;
  for (auto _ : state) {
    auto result = evolution_step(pop, scores, params, generation++, 42);
    benchmark::DoNotOptimize(result.population.data());
  }
}
BENCHMARK(BM_EvolutionStep)->Arg(7)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
