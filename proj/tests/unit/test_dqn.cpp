#include <gtest/gtest.h>

#include <array>
#include <random>

#include "lerl/dqn.hpp"
#include "lerl/errors.hpp"
#include "oracles/oracles.hpp"

namespace lerl {
namespace {

// Two-layer net whose output is `q` for every input (zero weights, bias = q).
LayeredNet constant_q(std::size_t inputs, std::vector<double> q) {
  const auto actions = static_cast<Eigen::Index>(q.size());
  DenseLayer first{Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(inputs)), Eigen::VectorXd::Zero(2)};
  DenseLayer second{Eigen::MatrixXd::Zero(actions, 2), Eigen::Map<Eigen::VectorXd>(q.data(), actions)};
  return LayeredNet({first, second}, 1);
}

DqnConfig small_config() {
  DqnConfig cfg;
  cfg.hidden_layers = {8};
  cfg.batch_size = 4;
  cfg.warmup_steps = 4;
  cfg.buffer_capacity = 100;
  cfg.target_sync_interval = 10;
  return cfg;
}

Observation one_hot(std::size_t n, std::size_t i) {
  Observation o(n, 0.0);
  o[i] = 1.0;
  return o;
}

std::vector<Transition> random_batch(std::mt19937_64& rng, std::size_t inputs, std::size_t actions,
                                     std::size_t count) {
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<std::size_t> pick(0, actions - 1);
  std::bernoulli_distribution coin(0.3);
  std::vector<Transition> batch;
  for (std::size_t i = 0; i < count; ++i) {
    Transition t;
    for (std::size_t k = 0; k < inputs; ++k) {
      t.state.push_back(n01(rng));
      t.next_state.push_back(n01(rng));
    }
    t.action = pick(rng);
    t.reward = n01(rng);
    t.done = coin(rng);
    batch.push_back(std::move(t));
  }
  return batch;
}

TEST(SelectAction, GreedyPicksArgmax) {
  QAgent agent(constant_q(3, {0.1, 0.9, 0.3}), small_config(), 1);
  const Observation obs(3, 0.0);
  EXPECT_EQ(agent.select_action(obs, 0.0), 1u);
}

TEST(SelectAction, TiesGoToLowestIndex) {
  QAgent agent(constant_q(3, {0.5, 0.5}), small_config(), 1);
  const Observation obs(3, 0.0);
  EXPECT_EQ(agent.select_action(obs, 0.0), 0u);
}

TEST(SelectAction, FullExplorationIsUniform) {
  QAgent agent(constant_q(3, {0.0, 1.0, 0.0, 0.0}), small_config(), 7);
  const Observation obs(3, 0.0);
  std::array<std::size_t, 4> counts{};
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) ++counts[agent.select_action(obs, 1.0)];
  for (auto c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 0.25, 0.01);
}

TEST(TdLoss, GammaZeroReducesToSquaredReward) {
  const auto net = constant_q(2, {0.0, 0.0});
  std::vector<Transition> batch{{{1, 0}, 0, 1.0, {0, 1}, false}};
  const auto r = td_loss(net, net, 0.0, batch);
  EXPECT_DOUBLE_EQ(r.loss, 1.0);
}

TEST(TdLoss, ZeroResidualHasZeroLossAndGradient) {
  const auto net = constant_q(2, {0.0, 0.0});
  std::vector<Transition> batch{{{1, 0}, 1, 0.0, {0, 1}, true}};
  const auto r = td_loss(net, net, 0.99, batch);
  EXPECT_EQ(r.loss, 0.0);
  for (const auto& g : r.gradient.layers) {
    EXPECT_TRUE(g.weights.isZero(0.0));
    EXPECT_TRUE(g.bias.isZero(0.0));
  }
}

TEST(TdLoss, MatchesLoopOracleValue) {
  std::mt19937_64 rng(21);
  const std::vector<std::size_t> sizes{3, 5, 4, 2};
  const auto online = LayeredNet::initialize(sizes, 1, rng);
  const auto target = LayeredNet::initialize(sizes, 1, rng);
  const auto batch = random_batch(rng, 3, 2, 6);
  EXPECT_NEAR(td_loss(online, target, 0.9, batch).loss, oracle::td_loss(online, target, 0.9, batch), 1e-12);
}

TEST(TdLoss, TinyNetGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  const std::vector<std::size_t> sizes{3, 4, 2};
  const auto online = LayeredNet::initialize(sizes, 1, rng);
  const auto target = LayeredNet::initialize(sizes, 1, rng);
  const auto batch = random_batch(rng, 3, 2, 2);
  const auto analytic = td_loss(online, target, 0.95, batch).gradient.layers;
  const auto numeric = oracle::finite_difference_gradient(online, target, 0.95, batch);
  EXPECT_LT(oracle::max_relative_error(analytic, numeric), 1e-5);
}

TEST(TdLoss, RandomNetsGradientProperty) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> width(1, 6);
  std::uniform_int_distribution<std::size_t> depth(2, 4);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::size_t> sizes{width(rng) + 1};
    const std::size_t layers = depth(rng);
    for (std::size_t l = 0; l + 1 < layers; ++l) sizes.push_back(width(rng) + 1);
    sizes.push_back(width(rng) + 1);
    std::uniform_int_distribution<std::size_t> part(1, layers - 1);
    const std::size_t p = part(rng);
    auto online = LayeredNet::initialize(sizes, p, rng);
    auto target = LayeredNet::initialize(sizes, p, rng);
    oracle::randomize_biases(online, rng);
    oracle::randomize_biases(target, rng);
    ASSERT_LE(online.parameter_count(), 200u);
    const auto batch = random_batch(rng, sizes.front(), sizes.back(), 1 + trial % 5);
    const auto analytic = td_loss(online, target, 0.9, batch).gradient.layers;
    const auto numeric = oracle::finite_difference_gradient(online, target, 0.9, batch);
    EXPECT_LT(oracle::max_relative_error(analytic, numeric), 1e-5) << "trial " << trial;
  }
}

TEST(TdLoss, EmptyBatchIsUsageError) {
  const auto net = constant_q(2, {0.0, 0.0});
  EXPECT_THROW(td_loss(net, net, 0.9, std::span<const Transition>{}), UsageError);
}

TEST(ReplayBuffer, RingKeepsLastCapacityTransitions) {
  ReplayBuffer buffer(5);
  for (std::size_t i = 0; i < 5 + 3; ++i) buffer.push({{0.0}, i, 0.0, {0.0}, false});
  ASSERT_EQ(buffer.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(buffer.at(i).action, i + 3);
}

TEST(TrainStep, NoopBeforeWarmup) {
  auto cfg = small_config();
  std::mt19937_64 rng(3);
  const std::vector<std::size_t> sizes{2, 8, 2};
  QAgent agent(LayeredNet::initialize(sizes, 1, rng), cfg, 5);
  agent.remember({{1, 0}, 0, 1.0, {0, 1}, true});
  const auto before = agent.online();
  EXPECT_FALSE(agent.train_step().has_value());
  EXPECT_TRUE(agent.online().identical(before));
  EXPECT_EQ(agent.train_steps(), 0u);
}

TEST(TrainStep, ZeroLearningRateLeavesParametersBitwise) {
  auto cfg = small_config();
  cfg.learning_rate = 0.0;
  std::mt19937_64 rng(3);
  const std::vector<std::size_t> sizes{2, 8, 2};
  QAgent agent(LayeredNet::initialize(sizes, 1, rng), cfg, 5);
  for (int i = 0; i < 8; ++i) agent.remember({{1, 0}, 1, 0.5, {0, 1}, false});
  const auto before = agent.online();
  ASSERT_TRUE(agent.train_step().has_value());
  EXPECT_TRUE(agent.online().identical(before));
}

TEST(TrainStep, SingleStepMovesQTowardReward) {
  auto cfg = small_config();
  cfg.gamma = 0.0;
  cfg.batch_size = 1;
  cfg.warmup_steps = 1;
  std::mt19937_64 rng(8);
  const std::vector<std::size_t> sizes{2, 8, 2};
  QAgent agent(LayeredNet::initialize(sizes, 1, rng), cfg, 5);
  const Transition t{{1, 0}, 1, 1.0, {0, 1}, true};
  agent.remember(t);
  const double before = agent.online().forward(t.state)(1);
  ASSERT_TRUE(agent.train_step().has_value());
  const double after = agent.online().forward(t.state)(1);
  EXPECT_GT(after, before);
  EXPECT_LT(std::abs(1.0 - after), std::abs(1.0 - before));
}

TEST(TrainStep, FitsFixedBufferWithoutBootstrap) {
  auto cfg = small_config();
  cfg.gamma = 0.0;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 3;
  cfg.warmup_steps = 3;
  std::mt19937_64 rng(9);
  const std::vector<std::size_t> sizes{3, 16, 2};
  QAgent agent(LayeredNet::initialize(sizes, 1, rng), cfg, 5);
  agent.remember({one_hot(3, 0), 0, 1.0, one_hot(3, 1), true});
  agent.remember({one_hot(3, 1), 1, -0.5, one_hot(3, 2), true});
  agent.remember({one_hot(3, 2), 0, 0.25, one_hot(3, 0), true});
  std::vector<Transition> all;
  for (std::size_t i = 0; i < 3; ++i) all.push_back(agent.buffer().at(i));
  const double initial = td_loss(agent.online(), agent.target(), cfg.gamma, all).loss;
  for (int i = 0; i < 500; ++i) agent.train_step();
  const double final_loss = td_loss(agent.online(), agent.target(), cfg.gamma, all).loss;
  EXPECT_LT(final_loss, initial);
  EXPECT_LT(final_loss, 1e-3);
}

TEST(TrainStep, TargetSyncsOnInterval) {
  auto cfg = small_config();
  cfg.learning_rate = 0.01;
  std::mt19937_64 rng(10);
  const std::vector<std::size_t> sizes{2, 8, 2};
  QAgent agent(LayeredNet::initialize(sizes, 1, rng), cfg, 5);
  for (int i = 0; i < 10; ++i) agent.remember({{1, 0}, 1, 1.0, {0, 1}, false});
  for (std::size_t i = 1; i < cfg.target_sync_interval; ++i) agent.train_step();
  EXPECT_FALSE(agent.target().identical(agent.online()));
  agent.train_step();
  EXPECT_TRUE(agent.target().identical(agent.online()));
}

TEST(RunIteration, AppendsExactlyBudgetTransitions) {
  auto cfg = small_config();
  cfg.warmup_steps = 1000000000;
  cfg.buffer_capacity = 1000;
  GridWorld env(3);
  auto agent = QAgent::create(env.spec(), cfg, 1, 2);
  const auto before = agent.online();
  const auto stats = agent.run_iteration(env, 100);
  EXPECT_EQ(stats.steps, 100u);
  EXPECT_EQ(agent.buffer().size(), 100u);
  EXPECT_EQ(agent.env_steps(), 100u);
  EXPECT_EQ(stats.train_steps, 0u);
  EXPECT_TRUE(agent.online().identical(before));
}

TEST(RunIteration, IdenticalSeedsGiveIdenticalParameters) {
  auto cfg = small_config();
  cfg.warmup_steps = 20;
  cfg.batch_size = 8;
  ChainWalk env_a(9, 0.2, 77);
  ChainWalk env_b(9, 0.2, 77);
  auto a = QAgent::create(env_a.spec(), cfg, 1, 2);
  auto b = QAgent::create(env_b.spec(), cfg, 1, 2);
  for (int i = 0; i < 3; ++i) {
    a.run_iteration(env_a, 150);
    b.run_iteration(env_b, 150);
  }
  EXPECT_TRUE(a.online().identical(b.online()));
  EXPECT_TRUE(a.target().identical(b.target()));
  EXPECT_GT(a.train_steps(), 0u);
}

TEST(Epsilon, LinearScheduleClampsAtEnd) {
  auto cfg = small_config();
  cfg.epsilon_decay_steps = 100;
  cfg.warmup_steps = 1000000;
  cfg.buffer_capacity = 1000;
  GridWorld env(3);
  auto agent = QAgent::create(env.spec(), cfg, 1, 2);
  EXPECT_DOUBLE_EQ(agent.epsilon(), 1.0);
  agent.run_iteration(env, 50);
  EXPECT_DOUBLE_EQ(agent.epsilon(), 1.0 + 0.5 * (0.05 - 1.0));
  agent.run_iteration(env, 100);
  EXPECT_DOUBLE_EQ(agent.epsilon(), 0.05);
}

TEST(CloneForEvolution, DeepCopyWithFreshState) {
  auto cfg = small_config();
  cfg.warmup_steps = 10;
  GridWorld env(3);
  auto parent = QAgent::create(env.spec(), cfg, 1, 2, 0.8);
  parent.run_iteration(env, 60);
  ASSERT_GT(parent.buffer().size(), 0u);
  const auto parent_params = parent.online();

  auto child = parent.clone_for_evolution(99);
  EXPECT_EQ(child.buffer().size(), 0u);
  EXPECT_EQ(child.env_steps(), 0u);
  EXPECT_EQ(child.train_steps(), 0u);
  EXPECT_EQ(child.seed(), 99u);
  EXPECT_EQ(child.lineage(), 0.8);
  EXPECT_TRUE(child.target().identical(child.online()));
  EXPECT_TRUE(child.online().identical(parent.online()));

  child.online().layer(0).weights *= 1.5;
  EXPECT_TRUE(parent.online().identical(parent_params));
}

TEST(DqnConfig, ValidationRejectsBadValues) {
  DqnConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.batch_size = 1000;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = DqnConfig{};
  cfg.epsilon_end = 0.5;
  cfg.epsilon_start = 0.2;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = DqnConfig{};
  cfg.partition_index = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace lerl
