// lerl: train LERL populations and no-evolution baselines, compare them, and
// score saved checkpoints.
//
//   lerl run      --config FILE [--seed N] --out DIR [--workers K]
//   lerl baseline --config FILE [--seed N] --out DIR [--workers K]
//   lerl report   --lerl DIR --baseline DIR [--smooth W] --out DIR
//   lerl eval     --checkpoint FILE --episodes K [--config FILE] [--seed N]
//
// Exit codes: 0 success, 1 runtime error, 2 configuration or usage error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lerl/checkpoint.hpp"
#include "lerl/config.hpp"
#include "lerl/errors.hpp"
#include "lerl/evaluate.hpp"
#include "lerl/metrics.hpp"
#include "lerl/orchestrator.hpp"
#include "lerl/run_io.hpp"
#include "lerl/seed.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct TrainOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> workers;
};

void add_train_options(CLI::App& cmd, TrainOptions& opts) {
  cmd.add_option("--config", opts.config, "Run configuration (JSON)")->required();
  cmd.add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd.add_option("--out", opts.out, "Output run directory (overrides output_dir)");
  cmd.add_option("--workers", opts.workers, "Training threads (0 = one per agent)");
}

fs::path prepare_output(const std::string& dir) {
  if (dir.empty()) throw lerl::ConfigError("no output directory: pass --out or set output_dir");
  const fs::path out(dir);
  if (fs::exists(out) && !fs::is_empty(out)) {
    throw lerl::ConfigError("output directory " + out.string() + " is not empty");
  }
  fs::create_directories(out);
  return out;
}

int train(const TrainOptions& opts, bool evolve) {
  lerl::RunConfigFile config = lerl::load_run_config(opts.config);
  if (opts.seed) config.population.master_seed = *opts.seed;
  if (opts.workers) config.population.workers = *opts.workers;
  if (!opts.out.empty()) config.output_dir = opts.out;
  config.population.validate();

  const fs::path out = prepare_output(config.output_dir);
  lerl::save_run_config(config, out / lerl::kConfigFile);

  lerl::CsvRunSink sink(out);
  const lerl::RunResult result = evolve ? lerl::run_lerl(config.population, &sink)
                                        : lerl::run_baseline(config.population, &sink);
  lerl::checkpoint_population(result.population, out / lerl::kPopulationFile);
  lerl::render_run_outputs(out, config.smooth_window);

  const auto best = lerl::best_per_generation(result.generations);
  fmt::print("{} run finished: {} iterations, {} evolution steps\n", evolve ? "lerl" : "baseline",
             config.population.total_iterations, result.evolution_steps);
  if (!best.empty()) fmt::print("final generation best score: {}\n", best.back());
  fmt::print("outputs written to {}\n", out.string());
  return 0;
}

int report(const std::string& lerl_dir, const std::string& baseline_dir,
           std::optional<std::size_t> smooth, const std::string& out_dir) {
  const lerl::RunData lerl_run = lerl::load_run_directory(lerl_dir);
  const lerl::RunData baseline_run = lerl::load_run_directory(baseline_dir);
  const auto differing = lerl::comparable_config_differences(lerl_run.config, baseline_run.config);
  if (!differing.empty()) {
    std::string keys;
    for (const auto& k : differing) keys += (keys.empty() ? "" : ", ") + k;
    throw lerl::ConfigError("runs are not comparable; differing keys: " + keys);
  }
  const std::size_t window = smooth.value_or(lerl_run.config.smooth_window);
  if (window < 1) throw lerl::ConfigError("--smooth must be at least 1");

  const fs::path out = prepare_output(out_dir);
  const auto result = lerl::comparative_report(lerl_run.iterations, lerl_run.generations,
                                               baseline_run.iterations, baseline_run.generations, window);
  lerl::write_report(result, lerl_run, baseline_run, out);

  fmt::print("{:<10} {:>12} {:>12} {:>14}\n", "run", "final_best", "final_median", "mean_auc");
  for (const auto& s : {result.lerl_summary, result.baseline_summary}) {
    fmt::print("{:<10} {:>12.4f} {:>12.4f} {:>14.4f}\n", s.label, s.final_best, s.final_median, s.mean_auc);
  }
  fmt::print("report written to {}\n", out.string());
  return 0;
}

int evaluate(const std::string& checkpoint, std::size_t episodes, std::string config_path,
             std::uint64_t seed) {
  if (episodes < 1) throw lerl::ConfigError("--episodes must be at least 1");
  if (config_path.empty()) config_path = (fs::path(checkpoint).parent_path() / lerl::kConfigFile).string();
  const lerl::RunConfigFile config = lerl::load_run_config(config_path);
  const auto snapshots = lerl::read_population(checkpoint, config.population.dqn.partition_index);
  const lerl::EnvSpec spec = lerl::env_spec(config.population.env);

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& net = snapshots[i].net;
    if (net.input_dim() != spec.observation_dim || net.output_dim() != spec.action_count) {
      throw lerl::ConfigError("checkpoint network does not fit the configured environment");
    }
    const double score = lerl::evaluate_deterministic(config.population.env, net, episodes,
                                                      lerl::derive_seed(seed, i, 0, lerl::SlotTag::kEval));
    best = std::max(best, score);
    fmt::print("agent {}: mean return {} (lineage {})\n", i, score, snapshots[i].lineage);
  }
  fmt::print("best: {}\n", best);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lineage evolution reinforcement learning"};
  app.require_subcommand(1);

  TrainOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Train a population with lineage evolution");
  add_train_options(*run_cmd, run_opts);

  TrainOptions baseline_opts;
  auto* baseline_cmd = app.add_subcommand("baseline", "Train independent agents without evolution");
  add_train_options(*baseline_cmd, baseline_opts);

  std::string lerl_dir, baseline_dir, report_out;
  std::optional<std::size_t> smooth;
  auto* report_cmd = app.add_subcommand("report", "Compare a LERL run against a baseline run");
  report_cmd->add_option("--lerl", lerl_dir, "LERL run directory")->required();
  report_cmd->add_option("--baseline", baseline_dir, "Baseline run directory")->required();
  report_cmd->add_option("--smooth", smooth, "Smoothing window in iterations");
  report_cmd->add_option("--out", report_out, "Report output directory")->required();

  std::string checkpoint, eval_config;
  std::size_t episodes = 10;
  std::uint64_t eval_seed = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Greedy evaluation of a checkpoint");
  eval_cmd->add_option("--checkpoint", checkpoint, "Population checkpoint file")->required();
  eval_cmd->add_option("--episodes", episodes, "Episodes per agent")->required();
  eval_cmd->add_option("--config", eval_config, "Run config (default: config.json beside the checkpoint)");
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return train(run_opts, true);
    if (*baseline_cmd) return train(baseline_opts, false);
    if (*report_cmd) return report(lerl_dir, baseline_dir, smooth, report_out);
    if (*eval_cmd) return evaluate(checkpoint, episodes, eval_config, eval_seed);
  } catch (const lerl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
