#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "lerl/config.hpp"
#include "lerl/metrics.hpp"
#include "lerl/orchestrator.hpp"

namespace lerl {

// Run directory layout.
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kIterationsFile = "iterations.csv";
inline constexpr const char* kGenerationsFile = "generations.csv";
inline constexpr const char* kCurvesFile = "curves.csv";
inline constexpr const char* kPopulationFile = "final_population.lerl";

// CSV schema. Every file starts with a "# lerl-csv v<N> <kind>" line followed by the header.
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kIterationsHeader = "iteration,agent_id,train_return,eval_score,epsilon";
inline constexpr const char* kGenerationsHeader =
    "generation,agent_id,raw_score,norm_score,lineage,gamma_value,rank,role,v_range";
inline constexpr const char* kCurvesHeader = "iteration,best,median,mean,smoothed_mean";

/// Shortest text that parses back to the identical double ("nan"/"inf" for non-finite values).
std::string format_real(double value);
double parse_real(const std::string& text);

std::string format_row(const IterationRecord& record);
std::string format_row(const GenerationRecord& record);
std::string format_row(const CurvePoint& point);
IterationRecord parse_iteration_row(const std::string& line);
GenerationRecord parse_generation_row(const std::string& line);
CurvePoint parse_curve_row(const std::string& line);

void write_iterations_csv(const std::filesystem::path& path, std::span<const IterationRecord> records);
void write_generations_csv(const std::filesystem::path& path, std::span<const GenerationRecord> records);
void write_curves_csv(const std::filesystem::path& path, std::span<const CurvePoint> curves);
std::vector<IterationRecord> read_iterations_csv(const std::filesystem::path& path);
std::vector<GenerationRecord> read_generations_csv(const std::filesystem::path& path);
std::vector<CurvePoint> read_curves_csv(const std::filesystem::path& path);

/// Streams records into iterations.csv / generations.csv of a run directory,
/// flushing after every batch so an aborted run leaves complete rows behind.
class CsvRunSink final : public RunSink {
 public:
  explicit CsvRunSink(const std::filesystem::path& directory);

  void on_iterations(std::span<const IterationRecord> records) override;
  void on_generation(std::span<const GenerationRecord> records) override;

 private:
  std::ofstream iterations_;
  std::ofstream generations_;
};

struct RunData {
  RunConfigFile config;
  std::vector<IterationRecord> iterations;
  std::vector<GenerationRecord> generations;
};

RunData load_run_directory(const std::filesystem::path& directory);

/// Config keys that must agree for two runs to be compared (environment and
/// budget). Returns the dotted names of those that differ.
std::vector<std::string> comparable_config_differences(const RunConfigFile& a, const RunConfigFile& b);

/// Writes curves.csv and the three charts for one run directory.
void render_run_outputs(const std::filesystem::path& directory, std::size_t smooth_window);

/// report.json, per-run curve CSVs, generation_ratio.csv and overlay charts.
void write_report(const ComparativeReport& report, const RunData& lerl, const RunData& baseline,
                  const std::filesystem::path& directory);

}  // namespace lerl
