#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace lerl {

using Observation = std::vector<double>;

struct EnvSpec {
  std::size_t observation_dim = 1;
  std::size_t action_count = 2;
  std::size_t max_episode_steps = 1;
  double discount = 0.99;
};

struct StepResult {
  Observation next_observation;
  double reward = 0.0;
  bool terminal = false;
  // Set when the episode ended only because the step cap was reached.
  bool truncated = false;
};

/// Single-owner episodic MDP. Transitions depend only on (state, action) plus
/// the environment's own noise stream.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const noexcept = 0;
  virtual Observation reset() = 0;
  /// Throws UsageError on an out-of-range action or when the episode is over.
  virtual StepResult step(std::size_t action) = 0;
  virtual bool terminal() const noexcept = 0;
  virtual std::size_t steps_taken() const noexcept = 0;
};

/// N x N grid, start in cell 0 (top-left), goal in cell N*N-1. Actions are
/// up/right/down/left; moving into a wall leaves the agent in place.
/// Reward 0 per step, +1 on entering the goal.
class GridWorld final : public Environment {
 public:
  enum Action : std::size_t { kUp = 0, kRight = 1, kDown = 2, kLeft = 3 };

  /// max_episode_steps == 0 selects the default cap of 4*N*N.
  explicit GridWorld(std::size_t side, std::size_t max_episode_steps = 0, double discount = 0.99);

  const EnvSpec& spec() const noexcept override { return spec_; }
  Observation reset() override;
  StepResult step(std::size_t action) override;
  bool terminal() const noexcept override { return terminal_; }
  std::size_t steps_taken() const noexcept override { return steps_; }

  std::size_t side() const noexcept { return side_; }
  std::size_t position() const noexcept { return position_; }
  std::size_t goal() const noexcept { return side_ * side_ - 1; }
  /// Places the agent on `cell` with a fresh step counter.
  Observation teleport(std::size_t cell);

 private:
  Observation encode() const;

  std::size_t side_;
  EnvSpec spec_;
  std::size_t position_ = 0;
  std::size_t steps_ = 0;
  bool terminal_ = false;
};

/// Linear chain of `length` cells, starting in the middle. Actions: 0 = left,
/// 1 = right; with probability `slip_probability` the executed action is
/// inverted. Entering the right end pays +1 and ends the episode, every
/// other step costs 0.01. The left end is a wall.
class ChainWalk final : public Environment {
 public:
  enum Action : std::size_t { kLeft = 0, kRight = 1 };

  static constexpr double kStepPenalty = -0.01;
  static constexpr double kGoalReward = 1.0;

  /// max_episode_steps == 0 selects the default cap of 4*length.
  ChainWalk(std::size_t length, double slip_probability, std::uint64_t seed,
            std::size_t max_episode_steps = 0, double discount = 0.99);

  const EnvSpec& spec() const noexcept override { return spec_; }
  Observation reset() override;
  StepResult step(std::size_t action) override;
  bool terminal() const noexcept override { return terminal_; }
  std::size_t steps_taken() const noexcept override { return steps_; }

  std::size_t length() const noexcept { return length_; }
  std::size_t position() const noexcept { return position_; }
  std::size_t start() const noexcept { return length_ / 2; }
  /// Number of steps on which the executed action differed from the chosen one.
  std::size_t slips() const noexcept { return slips_; }

 private:
  Observation encode() const;

  std::size_t length_;
  double slip_probability_;
  EnvSpec spec_;
  std::mt19937_64 rng_;
  std::size_t position_ = 0;
  std::size_t steps_ = 0;
  std::size_t slips_ = 0;
  bool terminal_ = false;
};

enum class EnvKind { kGridWorld, kChainWalk };

/// Serializable description of an environment; the factory turns it into an instance.
struct EnvConfig {
  EnvKind kind = EnvKind::kGridWorld;
  std::size_t side = 5;              // GridWorld
  std::size_t length = 19;           // ChainWalk
  double slip_probability = 0.0;     // ChainWalk
  std::size_t max_episode_steps = 0; // 0 = environment default
  double discount = 0.99;
};

std::unique_ptr<Environment> make_environment(const EnvConfig& config, std::uint64_t seed);
EnvSpec env_spec(const EnvConfig& config);
std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& name);

}  // namespace lerl
