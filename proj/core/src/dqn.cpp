#include "lerl/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lerl/errors.hpp"

namespace lerl {

void DqnConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("dqn.gamma must lie in (0, 1]");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("dqn.learning_rate must be a finite non-negative number");
  }
  if (batch_size == 0) throw ConfigError("dqn.batch_size must be positive");
  if (batch_size > warmup_steps) throw ConfigError("dqn.batch_size must not exceed dqn.warmup_steps");
  if (target_sync_interval == 0) throw ConfigError("dqn.target_sync_interval must be positive");
  if (buffer_capacity == 0) throw ConfigError("dqn.buffer_capacity must be positive");
  if (!(epsilon_start <= 1.0 && epsilon_start >= epsilon_end && epsilon_end >= 0.0)) {
    throw ConfigError("dqn epsilon schedule must satisfy 1 >= epsilon_start >= epsilon_end >= 0");
  }
  if (hidden_layers.empty()) throw ConfigError("dqn.hidden_layers needs at least one width");
  if (std::ranges::find(hidden_layers, std::size_t{0}) != hidden_layers.end()) {
    throw ConfigError("dqn.hidden_layers widths must be positive");
  }
  if (partition_index < 1 || partition_index > hidden_layers.size()) {
    throw ConfigError("dqn.partition_index must lie in [1, " +
                      std::to_string(hidden_layers.size()) + "]");
  }
}

std::vector<std::size_t> DqnConfig::layer_sizes(const EnvSpec& spec) const {
  std::vector<std::size_t> sizes;
  sizes.push_back(spec.observation_dim);
  sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
  sizes.push_back(spec.action_count);
  return sizes;
}

std::size_t argmax(const Eigen::VectorXd& values) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(i);
  }
  return best;
}

TdLoss td_loss(const LayeredNet& online, const LayeredNet& target, double gamma,
               std::span<const Transition* const> batch) {
  if (batch.empty()) throw UsageError("td_loss needs a non-empty batch");
  if (!online.same_architecture(target)) throw UsageError("online and target networks differ in shape");

  const auto in = static_cast<Eigen::Index>(online.input_dim());
  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd states(in, n);
  Eigen::MatrixXd next_states(in, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Transition& t = *batch[static_cast<std::size_t>(b)];
    if (t.state.size() != online.input_dim() || t.next_state.size() != online.input_dim()) {
      throw UsageError("transition observation width does not match the network");
    }
    if (t.action >= online.output_dim()) throw UsageError("transition action out of range");
    states.col(b) = Eigen::Map<const Eigen::VectorXd>(t.state.data(), in);
    next_states.col(b) = Eigen::Map<const Eigen::VectorXd>(t.next_state.data(), in);
  }

  const Eigen::MatrixXd next_q = target.forward_batch(next_states);

  // Forward pass keeping every layer's input and pre-activation.
  const auto& layers = online.layers();
  const std::size_t depth = layers.size();
  std::vector<Eigen::MatrixXd> inputs(depth);
  std::vector<Eigen::MatrixXd> pre(depth);
  inputs[0] = std::move(states);
  for (std::size_t l = 0; l < depth; ++l) {
    pre[l] = layers[l].weights * inputs[l];
    pre[l].colwise() += layers[l].bias;
    if (l + 1 < depth) inputs[l + 1] = pre[l].cwiseMax(0.0);
  }
  const Eigen::MatrixXd& q = pre[depth - 1];

  TdLoss result;
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), n);
  const double scale = 1.0 / static_cast<double>(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Transition& t = *batch[static_cast<std::size_t>(b)];
    const double bootstrap = t.done ? 0.0 : gamma * next_q.col(b).maxCoeff();
    const double residual = q(static_cast<Eigen::Index>(t.action), b) - (t.reward + bootstrap);
    result.loss += residual * residual * scale;
    delta(static_cast<Eigen::Index>(t.action), b) = 2.0 * residual * scale;
  }

  result.gradient.layers.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    auto& grad = result.gradient.layers[l];
    grad.weights = delta * inputs[l].transpose();
    grad.bias = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd upstream = layers[l].weights.transpose() * delta;
      delta = upstream.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return result;
}

TdLoss td_loss(const LayeredNet& online, const LayeredNet& target, double gamma,
               std::span<const Transition> batch) {
  std::vector<const Transition*> pointers;
  pointers.reserve(batch.size());
  for (const auto& t : batch) pointers.push_back(&t);
  return td_loss(online, target, gamma, pointers);
}

QAgent::QAgent(LayeredNet online, DqnConfig config, std::uint64_t seed, double lineage)
    : online_(std::move(online)),
      target_(online_),
      config_(std::move(config)),
      buffer_(config_.buffer_capacity),
      seed_(seed),
      rng_(seed),
      lineage_(lineage) {}

QAgent QAgent::create(const EnvSpec& spec, const DqnConfig& config, std::uint64_t init_seed,
                      std::uint64_t seed, double lineage) {
  std::mt19937_64 init_rng(init_seed);
  const auto sizes = config.layer_sizes(spec);
  return QAgent(LayeredNet::initialize(sizes, config.partition_index, init_rng), config, seed,
                lineage);
}

std::size_t QAgent::greedy_action(std::span<const double> observation) const {
  return argmax(online_.forward(observation));
}

std::size_t QAgent::select_action(std::span<const double> observation, double epsilon) {
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, online_.output_dim() - 1);
      return pick(rng_);
    }
  }
  return greedy_action(observation);
}

double QAgent::epsilon() const noexcept {
  if (config_.epsilon_decay_steps == 0 || env_steps_ >= config_.epsilon_decay_steps) {
    return config_.epsilon_end;
  }
  const double fraction =
      static_cast<double>(env_steps_) / static_cast<double>(config_.epsilon_decay_steps);
  return config_.epsilon_start + fraction * (config_.epsilon_end - config_.epsilon_start);
}

void QAgent::remember(Transition transition) { buffer_.push(std::move(transition)); }

std::optional<double> QAgent::train_step() {
  if (buffer_.size() < config_.warmup_steps || buffer_.empty()) return std::nullopt;
  const auto batch = buffer_.sample(config_.batch_size, rng_);
  TdLoss step = td_loss(online_, target_, config_.gamma, batch);
  apply_gradient(online_, step.gradient, config_.learning_rate);
  ++train_steps_;
  if (train_steps_ % config_.target_sync_interval == 0) sync_target();
  return step.loss;
}

IterationStats QAgent::run_iteration(Environment& env, std::size_t budget) {
  IterationStats stats;
  Observation observation = env.reset();
  double episode_return = 0.0;
  double finished_return_sum = 0.0;
  for (std::size_t i = 0; i < budget; ++i) {
    const std::size_t action = select_action(observation, epsilon());
    StepResult result = env.step(action);
    ++env_steps_;
    ++stats.steps;
    episode_return += result.reward;
    const bool terminal = result.terminal;
    remember(Transition{std::move(observation), action, result.reward, result.next_observation,
                        result.terminal && !result.truncated});
    if (train_step()) ++stats.train_steps;
    if (terminal) {
      ++stats.episodes_finished;
      finished_return_sum += episode_return;
      episode_return = 0.0;
      observation = env.reset();
    } else {
      observation = std::move(result.next_observation);
    }
  }
  stats.mean_return = stats.episodes_finished > 0
                          ? finished_return_sum / static_cast<double>(stats.episodes_finished)
                          : episode_return;
  return stats;
}

QAgent QAgent::clone_for_evolution(std::uint64_t seed) const {
  return QAgent(online_, config_, seed, lineage_);
}

void QAgent::sync_target() { target_ = online_; }

}  // namespace lerl
