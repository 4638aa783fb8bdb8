#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "lerl/orchestrator.hpp"

namespace lerl {

/// Contents of a run configuration file.
///
/// Layout (JSON object; unknown keys anywhere are rejected):
///
///   master_seed, workers, output_dir                      optional
///   env        { type*, side, length, slip_probability, max_episode_steps }
///   population { size*, elite*, general*, mutation*, crossover*,
///                evolution_cycle*, total_iterations*, iteration_steps*,
///                eval_episodes }
///   lineage    { w_rho, w_phi, zeta_o }
///   mutation   { v_part, v_range0, v_range_decay, v_range_min }
///   decay      { zeta_m, zeta_c }
///   dqn        { gamma, learning_rate, batch_size, target_sync_interval,
///                warmup_steps, epsilon_start, epsilon_end,
///                epsilon_decay_steps, buffer_capacity, hidden_layers,
///                partition_index }
///   report     { smooth_window }
///
/// Keys marked * are required. The environment discount is taken from dqn.gamma.
struct RunConfigFile {
  PopulationConfig population;
  std::string output_dir;
  std::size_t smooth_window = 5;
};

/// Throws ConfigError naming the offending key.
RunConfigFile parse_run_config(const nlohmann::json& document);
RunConfigFile load_run_config(const std::filesystem::path& path);

/// Every field written explicitly; parse_run_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfigFile& config);
void save_run_config(const RunConfigFile& config, const std::filesystem::path& path);

}  // namespace lerl
