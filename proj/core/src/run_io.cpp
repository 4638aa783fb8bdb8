#include "lerl/run_io.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "lerl/charts.hpp"
#include "lerl/errors.hpp"

namespace lerl {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::size_t parse_index(const std::string& text) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + text + "'");
  }
  if (used != text.size() || text.front() == '-') throw UsageError("not an integer: '" + text + "'");
  return static_cast<std::size_t>(value);
}

std::vector<std::string> expect_fields(const std::string& line, std::size_t count) {
  auto fields = split_csv(line);
  if (fields.size() != count) {
    throw UsageError(fmt::format("expected {} CSV fields, got {} in '{}'", count, fields.size(), line));
  }
  return fields;
}

std::string schema_line(const char* kind) { return fmt::format("# lerl-csv v{} {}", kCsvSchemaVersion, kind); }

std::ofstream open_csv(const std::filesystem::path& path, const char* kind, const char* header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << schema_line(kind) << '\n' << header << '\n';
  return out;
}

template <typename Record, typename Parse>
std::vector<Record> read_csv(const std::filesystem::path& path, const char* kind, const char* header,
                             Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != schema_line(kind)) {
    throw UsageError(path.string() + ": missing or unsupported schema line");
  }
  if (!std::getline(in, line) || line != header) {
    throw UsageError(path.string() + ": unexpected header");
  }
  std::vector<Record> records;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(parse(line));
  }
  return records;
}

template <typename Record>
void write_rows(std::ofstream& out, std::span<const Record> records) {
  for (const auto& r : records) out << format_row(r) << '\n';
  out.flush();
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string("undefined");
}

nlohmann::json optional_array(const std::vector<std::optional<double>>& values) {
  auto array = nlohmann::json::array();
  for (const auto& v : values) {
    if (v) {
      array.push_back(*v);
    } else {
      array.push_back(nullptr);
    }
  }
  return array;
}

nlohmann::json summary_json(const RunSummary& s) {
  return {{"label", s.label}, {"final_best", s.final_best}, {"final_median", s.final_median},
          {"mean_auc", s.mean_auc}};
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

double parse_real(const std::string& text) {
  if (text.empty()) throw UsageError("empty numeric field");
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw UsageError("not a number: '" + text + "'");
  return value;
}

std::string format_row(const IterationRecord& r) {
  return fmt::format("{},{},{},{},{}", r.iteration, r.agent_id, format_real(r.train_return),
                     format_real(r.eval_score), format_real(r.epsilon));
}

std::string format_row(const GenerationRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{}", r.generation, r.agent_id, format_real(r.raw_score),
                     format_real(r.norm_score), format_real(r.lineage), format_real(r.gamma_value), r.rank,
                     to_string(r.role), format_real(r.v_range));
}

std::string format_row(const CurvePoint& p) {
  return fmt::format("{},{},{},{},{}", p.iteration, format_real(p.best), format_real(p.median),
                     format_real(p.mean), format_real(p.smoothed_mean));
}

IterationRecord parse_iteration_row(const std::string& line) {
  const auto f = expect_fields(line, 5);
  return {parse_index(f[0]), parse_index(f[1]), parse_real(f[2]), parse_real(f[3]), parse_real(f[4])};
}

GenerationRecord parse_generation_row(const std::string& line) {
  const auto f = expect_fields(line, 9);
  return {parse_index(f[0]), parse_index(f[1]), parse_real(f[2]), parse_real(f[3]),
          parse_real(f[4]),  parse_real(f[5]),  parse_index(f[6]), agent_role_from_string(f[7]),
          parse_real(f[8])};
}

CurvePoint parse_curve_row(const std::string& line) {
  const auto f = expect_fields(line, 5);
  return {parse_index(f[0]), parse_real(f[1]), parse_real(f[2]), parse_real(f[3]), parse_real(f[4])};
}

void write_iterations_csv(const std::filesystem::path& path, std::span<const IterationRecord> records) {
  auto out = open_csv(path, "iterations", kIterationsHeader);
  write_rows(out, records);
}

void write_generations_csv(const std::filesystem::path& path, std::span<const GenerationRecord> records) {
  auto out = open_csv(path, "generations", kGenerationsHeader);
  write_rows(out, records);
}

void write_curves_csv(const std::filesystem::path& path, std::span<const CurvePoint> curves) {
  auto out = open_csv(path, "curves", kCurvesHeader);
  write_rows(out, curves);
}

std::vector<IterationRecord> read_iterations_csv(const std::filesystem::path& path) {
  return read_csv<IterationRecord>(path, "iterations", kIterationsHeader, parse_iteration_row);
}

std::vector<GenerationRecord> read_generations_csv(const std::filesystem::path& path) {
  return read_csv<GenerationRecord>(path, "generations", kGenerationsHeader, parse_generation_row);
}

std::vector<CurvePoint> read_curves_csv(const std::filesystem::path& path) {
  return read_csv<CurvePoint>(path, "curves", kCurvesHeader, parse_curve_row);
}

CsvRunSink::CsvRunSink(const std::filesystem::path& directory)
    : iterations_(open_csv(directory / kIterationsFile, "iterations", kIterationsHeader)),
      generations_(open_csv(directory / kGenerationsFile, "generations", kGenerationsHeader)) {
  iterations_.flush();
  generations_.flush();
}

void CsvRunSink::on_iterations(std::span<const IterationRecord> records) {
  write_rows(iterations_, records);
}

void CsvRunSink::on_generation(std::span<const GenerationRecord> records) {
  write_rows(generations_, records);
}

RunData load_run_directory(const std::filesystem::path& directory) {
  RunData data;
  data.config = load_run_config(directory / kConfigFile);
  data.iterations = read_iterations_csv(directory / kIterationsFile);
  data.generations = read_generations_csv(directory / kGenerationsFile);
  return data;
}

std::vector<std::string> comparable_config_differences(const RunConfigFile& a, const RunConfigFile& b) {
  const auto ja = to_json(a);
  const auto jb = to_json(b);
  std::vector<std::string> differing;
  const auto compare = [&](const std::string& section, const std::string& key) {
    const auto& va = ja.at(section).contains(key) ? ja.at(section).at(key) : nlohmann::json();
    const auto& vb = jb.at(section).contains(key) ? jb.at(section).at(key) : nlohmann::json();
    if (va != vb) differing.push_back(section + "." + key);
  };
  for (const char* key : {"type", "side", "length", "slip_probability", "max_episode_steps"}) {
    compare("env", key);
  }
  for (const char* key : {"total_iterations", "iteration_steps", "evolution_cycle", "eval_episodes"}) {
    compare("population", key);
  }
  return differing;
}

void render_run_outputs(const std::filesystem::path& directory, std::size_t smooth_window) {
  const auto iterations = read_iterations_csv(directory / kIterationsFile);
  const auto scores = score_matrix(iterations);
  const auto curves = aggregate_curves(scores, smooth_window);
  write_curves_csv(directory / kCurvesFile, curves);
  render_charts(chart_set("run", scores, curves), directory);
}

void write_report(const ComparativeReport& report, const RunData& lerl, const RunData& baseline,
                  const std::filesystem::path& directory) {
  write_curves_csv(directory / "lerl_curves.csv", report.lerl_curves);
  write_curves_csv(directory / "baseline_curves.csv", report.baseline_curves);

  {
    std::ofstream out(directory / "generation_ratio.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write generation_ratio.csv");
    out << schema_line("generation_ratio") << '\n'
        << "generation,lerl_best,baseline_best,best_ratio,lerl_growth,baseline_growth\n";
    for (std::size_t g = 0; g < report.best_ratio.size(); ++g) {
      const auto growth = [&](const std::vector<std::optional<double>>& series) {
        return g == 0 ? std::string("undefined") : format_optional(series[g - 1]);
      };
      out << fmt::format("{},{},{},{},{},{}\n", g, format_real(report.lerl_best_per_generation[g]),
                         format_real(report.baseline_best_per_generation[g]),
                         format_optional(report.best_ratio[g]), growth(report.lerl_growth),
                         growth(report.baseline_growth));
    }
  }

  const nlohmann::json doc = {
      {"summary", {summary_json(report.lerl_summary), summary_json(report.baseline_summary)}},
      {"lerl_best_per_generation", report.lerl_best_per_generation},
      {"baseline_best_per_generation", report.baseline_best_per_generation},
      {"best_ratio", optional_array(report.best_ratio)},
      {"lerl_growth_rate", optional_array(report.lerl_growth)},
      {"baseline_growth_rate", optional_array(report.baseline_growth)},
      {"lerl_master_seed", lerl.config.population.master_seed},
      {"baseline_master_seed", baseline.config.population.master_seed},
  };
  std::ofstream out(directory / "report.json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report.json");
  out << doc.dump(2) << '\n';

  ChartSet charts = chart_set("lerl", score_matrix(lerl.iterations), report.lerl_curves);
  merge_chart_sets(charts, chart_set("baseline", score_matrix(baseline.iterations), report.baseline_curves));
  render_charts(charts, directory);
}

}  // namespace lerl
