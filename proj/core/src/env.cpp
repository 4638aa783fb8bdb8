#include "lerl/env.hpp"

#include <string>

#include "lerl/errors.hpp"

namespace lerl {
namespace {

void check_action(const Environment& env, std::size_t action) {
  if (env.terminal()) {
    throw UsageError("step() called on a terminal environment; call reset() first");
  }
  if (action >= env.spec().action_count) {
    throw UsageError("action " + std::to_string(action) + " out of range [0, " +
                     std::to_string(env.spec().action_count) + ")");
  }
}

}  // namespace

GridWorld::GridWorld(std::size_t side, std::size_t max_episode_steps, double discount)
    : side_(side) {
  if (side < 2) throw UsageError("GridWorld side must be at least 2");
  spec_.observation_dim = side * side;
  spec_.action_count = 4;
  spec_.max_episode_steps = max_episode_steps == 0 ? 4 * side * side : max_episode_steps;
  spec_.discount = discount;
  reset();
}

Observation GridWorld::encode() const {
  Observation obs(side_ * side_, 0.0);
  obs[position_] = 1.0;
  return obs;
}

Observation GridWorld::reset() {
  position_ = 0;
  steps_ = 0;
  terminal_ = false;
  return encode();
}

Observation GridWorld::teleport(std::size_t cell) {
  if (cell >= side_ * side_) throw UsageError("GridWorld cell out of range");
  position_ = cell;
  steps_ = 0;
  terminal_ = cell == goal();
  return encode();
}

StepResult GridWorld::step(std::size_t action) {
  check_action(*this, action);
  std::size_t row = position_ / side_;
  std::size_t col = position_ % side_;
  switch (action) {
    case kUp:
      if (row > 0) --row;
      break;
    case kRight:
      if (col + 1 < side_) ++col;
      break;
    case kDown:
      if (row + 1 < side_) ++row;
      break;
    case kLeft:
      if (col > 0) --col;
      break;
  }
  position_ = row * side_ + col;
  ++steps_;

  StepResult result;
  result.next_observation = encode();
  if (position_ == goal()) {
    result.reward = 1.0;
    result.terminal = true;
  } else if (steps_ >= spec_.max_episode_steps) {
    result.terminal = true;
    result.truncated = true;
  }
  terminal_ = result.terminal;
  return result;
}

ChainWalk::ChainWalk(std::size_t length, double slip_probability, std::uint64_t seed,
                     std::size_t max_episode_steps, double discount)
    : length_(length), slip_probability_(slip_probability), rng_(seed) {
  if (length < 3) throw UsageError("ChainWalk length must be at least 3");
  if (!(slip_probability >= 0.0 && slip_probability < 1.0)) {
    throw UsageError("ChainWalk slip probability must lie in [0, 1)");
  }
  spec_.observation_dim = length;
  spec_.action_count = 2;
  spec_.max_episode_steps = max_episode_steps == 0 ? 4 * length : max_episode_steps;
  spec_.discount = discount;
  reset();
}

Observation ChainWalk::encode() const {
  Observation obs(length_, 0.0);
  obs[position_] = 1.0;
  return obs;
}

Observation ChainWalk::reset() {
  position_ = start();
  steps_ = 0;
  terminal_ = false;
  return encode();
}

StepResult ChainWalk::step(std::size_t action) {
  check_action(*this, action);
  std::size_t executed = action;
  if (slip_probability_ > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) < slip_probability_) {
      executed = action == kLeft ? kRight : kLeft;
      ++slips_;
    }
  }
  if (executed == kRight) {
    ++position_;
  } else if (position_ > 0) {
    --position_;
  }
  ++steps_;

  StepResult result;
  result.next_observation = encode();
  if (position_ == length_ - 1) {
    result.reward = kGoalReward;
    result.terminal = true;
  } else {
    result.reward = kStepPenalty;
    if (steps_ >= spec_.max_episode_steps) {
      result.terminal = true;
      result.truncated = true;
    }
  }
  terminal_ = result.terminal;
  return result;
}

std::unique_ptr<Environment> make_environment(const EnvConfig& config, std::uint64_t seed) {
  switch (config.kind) {
    case EnvKind::kGridWorld:
      return std::make_unique<GridWorld>(config.side, config.max_episode_steps, config.discount);
    case EnvKind::kChainWalk:
      return std::make_unique<ChainWalk>(config.length, config.slip_probability, seed,
                                         config.max_episode_steps, config.discount);
  }
  throw UsageError("unknown environment kind");
}

EnvSpec env_spec(const EnvConfig& config) { return make_environment(config, 0)->spec(); }

std::string to_string(EnvKind kind) {
  return kind == EnvKind::kGridWorld ? "gridworld" : "chainwalk";
}

EnvKind env_kind_from_string(const std::string& name) {
  if (name == "gridworld") return EnvKind::kGridWorld;
  if (name == "chainwalk") return EnvKind::kChainWalk;
  throw ConfigError("unknown environment type '" + name + "' (expected gridworld or chainwalk)");
}

}  // namespace lerl
