#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "lerl/env.hpp"
#include "lerl/layered_net.hpp"
#include "lerl/replay_buffer.hpp"

namespace lerl {

struct DqnConfig {
  double gamma = 0.99;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t target_sync_interval = 100;  // in train steps
  std::size_t warmup_steps = 500;          // buffer size before training starts
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::size_t epsilon_decay_steps = 20000;  // in env steps
  std::size_t buffer_capacity = 10000;
  std::vector<std::size_t> hidden_layers{64, 64};
  std::size_t partition_index = 1;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
  /// Full width list for an environment: observation_dim, hidden..., action_count.
  std::vector<std::size_t> layer_sizes(const EnvSpec& spec) const;
};

struct TdLoss {
  double loss = 0.0;
  NetGradient gradient;  // d loss / d online parameters
};

/// Mean squared TD error of a batch against a frozen target network:
///   (r + gamma * (1 - done) * max_a' target(s', a') - online(s, a))^2
/// The gradient only flows through online(s, a).
TdLoss td_loss(const LayeredNet& online, const LayeredNet& target, double gamma,
               std::span<const Transition* const> batch);
TdLoss td_loss(const LayeredNet& online, const LayeredNet& target, double gamma,
               std::span<const Transition> batch);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(const Eigen::VectorXd& values);

struct IterationStats {
  std::size_t steps = 0;
  std::size_t episodes_finished = 0;
  // Mean undiscounted return of finished episodes, or the running return of
  // the unfinished one when no episode ended during the iteration.
  double mean_return = 0.0;
  std::size_t train_steps = 0;
};

/// DQN learner: online/target networks, private replay buffer, epsilon-greedy
/// exploration and a single seeded RNG stream for all of its randomness.
class QAgent {
 public:
  QAgent(LayeredNet online, DqnConfig config, std::uint64_t seed, double lineage = 0.5);

  /// Fresh agent for `spec` with weights drawn from `init_seed`.
  static QAgent create(const EnvSpec& spec, const DqnConfig& config, std::uint64_t init_seed,
                       std::uint64_t seed, double lineage = 0.5);

  std::size_t select_action(std::span<const double> observation, double epsilon);
  std::size_t greedy_action(std::span<const double> observation) const;
  /// Linear schedule from epsilon_start to epsilon_end over epsilon_decay_steps env steps.
  double epsilon() const noexcept;

  void remember(Transition transition);
  /// One SGD step on a uniformly sampled batch; std::nullopt (and no change)
  /// while the buffer holds fewer than warmup_steps transitions.
  std::optional<double> train_step();
  /// `budget` env steps starting from a fresh episode, training after every
  /// step once warmed up. An episode still running at the end is dropped.
  IterationStats run_iteration(Environment& env, std::size_t budget);

  /// Copy of the online network with target = online, empty buffer, zeroed
  /// counters and a fresh RNG stream seeded by `seed`. Lineage is copied.
  QAgent clone_for_evolution(std::uint64_t seed) const;
  void sync_target();

  const LayeredNet& online() const noexcept { return online_; }
  LayeredNet& online() noexcept { return online_; }
  const LayeredNet& target() const noexcept { return target_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }
  const DqnConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t env_steps() const noexcept { return env_steps_; }
  std::size_t train_steps() const noexcept { return train_steps_; }
  double lineage() const noexcept { return lineage_; }
  void set_lineage(double value) noexcept { lineage_ = value; }

 private:
  LayeredNet online_;
  LayeredNet target_;
  DqnConfig config_;
  ReplayBuffer buffer_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::size_t env_steps_ = 0;
  std::size_t train_steps_ = 0;
  double lineage_;
};

}  // namespace lerl
