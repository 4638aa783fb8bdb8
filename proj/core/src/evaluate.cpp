#include "lerl/evaluate.hpp"

#include "lerl/dqn.hpp"
#include "lerl/errors.hpp"

namespace lerl {

double evaluate_deterministic(Environment& env, const LayeredNet& net, std::size_t episodes) {
  if (episodes == 0) throw UsageError("evaluation needs at least one episode");
  double total = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    Observation observation = env.reset();
    double episode_return = 0.0;
    while (!env.terminal()) {
      StepResult result = env.step(argmax(net.forward(observation)));
      episode_return += result.reward;
      observation = std::move(result.next_observation);
    }
    total += episode_return;
  }
  return total / static_cast<double>(episodes);
}

double evaluate_deterministic(const EnvConfig& config, const LayeredNet& net, std::size_t episodes,
                              std::uint64_t eval_seed) {
  auto env = make_environment(config, eval_seed);
  return evaluate_deterministic(*env, net, episodes);
}

}  // namespace lerl
