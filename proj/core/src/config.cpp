#include "lerl/config.hpp"

#include <fstream>
#include <limits>
#include <set>

#include "lerl/errors.hpp"

namespace lerl {
namespace {

using nlohmann::json;

/// Reads one JSON object section, tracking which keys were consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out, bool required = false) {
    seen_.insert(key);
    if (!node_.contains(key)) {
      if (required) throw ConfigError("missing required key " + qualified(key));
      return;
    }
    out = convert<T>(node_.at(key), qualified(key));
  }

  Section child(const std::string& key, bool required = false) {
    seen_.insert(key);
    if (!node_.contains(key)) {
      if (required) throw ConfigError("missing required section " + qualified(key));
      return Section(empty_object(), qualified(key));
    }
    return Section(node_.at(key), qualified(key));
  }

  void reject_unknown() const {
    for (const auto& [key, _] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key " + qualified(key));
    }
  }

 private:
  static const json& empty_object() {
    static const json empty = json::object();
    return empty;
  }

  std::string where() const { return path_.empty() ? "config root" : "'" + path_ + "'"; }
  std::string qualified(const std::string& key) const {
    return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  template <typename T>
  static T convert(const json& value, const std::string& name) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw ConfigError(name + " must be a string");
      return value.get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!value.is_number()) throw ConfigError(name + " must be a number");
      return value.get<double>();
    } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
      if (!value.is_array()) throw ConfigError(name + " must be an array");
      std::vector<std::size_t> out;
      for (const auto& v : value) out.push_back(convert<std::size_t>(v, name));
      return out;
    } else {
      static_assert(std::is_unsigned_v<T>);
      const bool non_negative =
          value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0);
      if (!non_negative) throw ConfigError(name + " must be a non-negative integer");
      const auto raw = value.get<std::uint64_t>();
      if (raw > std::numeric_limits<T>::max()) throw ConfigError(name + " is too large");
      return static_cast<T>(raw);
    }
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfigFile parse_run_config(const json& document) {
  RunConfigFile out;
  PopulationConfig& pc = out.population;
  Section root(document, "");
  root.read("master_seed", pc.master_seed);
  root.read("workers", pc.workers);
  root.read("output_dir", out.output_dir);

  {
    Section env = root.child("env", true);
    std::string type;
    env.read("type", type, true);
    pc.env.kind = env_kind_from_string(type);
    env.read("side", pc.env.side);
    env.read("length", pc.env.length);
    env.read("slip_probability", pc.env.slip_probability);
    env.read("max_episode_steps", pc.env.max_episode_steps);
    env.reject_unknown();
  }
  {
    Section pop = root.child("population", true);
    pop.read("size", pc.population_size, true);
    pop.read("elite", pc.plan.n_elite, true);
    pop.read("general", pc.plan.n_general, true);
    pop.read("mutation", pc.plan.n_mutation, true);
    pop.read("crossover", pc.plan.n_crossover, true);
    pop.read("evolution_cycle", pc.evolution_cycle, true);
    pop.read("total_iterations", pc.total_iterations, true);
    pop.read("iteration_steps", pc.iteration_steps, true);
    pop.read("eval_episodes", pc.eval_episodes);
    pop.reject_unknown();
  }
  {
    Section s = root.child("lineage");
    s.read("w_rho", pc.weights.w_rho);
    s.read("w_phi", pc.weights.w_phi);
    s.read("zeta_o", pc.weights.zeta_o);
    s.reject_unknown();
  }
  {
    Section s = root.child("mutation");
    s.read("v_part", pc.mutation.v_part);
    s.read("v_range0", pc.mutation.v_range0);
    s.read("v_range_decay", pc.mutation.v_range_decay);
    s.read("v_range_min", pc.mutation.v_range_min);
    s.reject_unknown();
  }
  {
    Section s = root.child("decay");
    s.read("zeta_m", pc.decay.zeta_m);
    s.read("zeta_c", pc.decay.zeta_c);
    s.reject_unknown();
  }
  {
    Section s = root.child("dqn");
    auto& d = pc.dqn;
    s.read("gamma", d.gamma);
    s.read("learning_rate", d.learning_rate);
    s.read("batch_size", d.batch_size);
    s.read("target_sync_interval", d.target_sync_interval);
    s.read("warmup_steps", d.warmup_steps);
    s.read("epsilon_start", d.epsilon_start);
    s.read("epsilon_end", d.epsilon_end);
    s.read("epsilon_decay_steps", d.epsilon_decay_steps);
    s.read("buffer_capacity", d.buffer_capacity);
    s.read("hidden_layers", d.hidden_layers);
    s.read("partition_index", d.partition_index);
    s.reject_unknown();
  }
  {
    Section s = root.child("report");
    s.read("smooth_window", out.smooth_window);
    s.reject_unknown();
  }
  root.reject_unknown();

  pc.env.discount = pc.dqn.gamma;
  pc.validate();
  if (out.smooth_window < 1) throw ConfigError("'report.smooth_window' must be at least 1");
  return out;
}

RunConfigFile load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(document);
}

json to_json(const RunConfigFile& config) {
  const PopulationConfig& pc = config.population;
  json env = {{"type", to_string(pc.env.kind)},
              {"max_episode_steps", pc.env.max_episode_steps}};
  if (pc.env.kind == EnvKind::kGridWorld) {
    env["side"] = pc.env.side;
  } else {
    env["length"] = pc.env.length;
    env["slip_probability"] = pc.env.slip_probability;
  }
  const auto& d = pc.dqn;
  return json{
      {"master_seed", pc.master_seed},
      {"workers", pc.workers},
      {"output_dir", config.output_dir},
      {"env", env},
      {"population",
       {{"size", pc.population_size},
        {"elite", pc.plan.n_elite},
        {"general", pc.plan.n_general},
        {"mutation", pc.plan.n_mutation},
        {"crossover", pc.plan.n_crossover},
        {"evolution_cycle", pc.evolution_cycle},
        {"total_iterations", pc.total_iterations},
        {"iteration_steps", pc.iteration_steps},
        {"eval_episodes", pc.eval_episodes}}},
      {"lineage", {{"w_rho", pc.weights.w_rho}, {"w_phi", pc.weights.w_phi}, {"zeta_o", pc.weights.zeta_o}}},
      {"mutation",
       {{"v_part", pc.mutation.v_part},
        {"v_range0", pc.mutation.v_range0},
        {"v_range_decay", pc.mutation.v_range_decay},
        {"v_range_min", pc.mutation.v_range_min}}},
      {"decay", {{"zeta_m", pc.decay.zeta_m}, {"zeta_c", pc.decay.zeta_c}}},
      {"dqn",
       {{"gamma", d.gamma},
        {"learning_rate", d.learning_rate},
        {"batch_size", d.batch_size},
        {"target_sync_interval", d.target_sync_interval},
        {"warmup_steps", d.warmup_steps},
        {"epsilon_start", d.epsilon_start},
        {"epsilon_end", d.epsilon_end},
        {"epsilon_decay_steps", d.epsilon_decay_steps},
        {"buffer_capacity", d.buffer_capacity},
        {"hidden_layers", d.hidden_layers},
        {"partition_index", d.partition_index}}},
      {"report", {{"smooth_window", config.smooth_window}}},
  };
}

void save_run_config(const RunConfigFile& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
}

}  // namespace lerl
