#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lerl/orchestrator.hpp"

namespace lerl {

struct CurvePoint {
  std::size_t iteration = 0;
  double best = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double smoothed_mean = 0.0;  // trailing moving average of `mean`
};

/// Score matrix indexed [agent][iteration].
using ScoreMatrix = std::vector<std::vector<double>>;

/// Per-iteration best / median / mean over agents, plus a trailing moving
/// average of the mean over `smooth_window` iterations (shorter at the start).
/// Throws UsageError for empty input, ragged rows, or a zero window.
std::vector<CurvePoint> aggregate_curves(const ScoreMatrix& per_agent_scores, std::size_t smooth_window);

/// best[g] / best[g-1] for g >= 1; std::nullopt where the previous best is zero.
std::vector<std::optional<double>> growth_rate(std::span<const double> best_per_generation);

/// Eval scores from iteration logs, as [agent][iteration].
ScoreMatrix score_matrix(std::span<const IterationRecord> records);
/// Highest raw score of each generation.
std::vector<double> best_per_generation(std::span<const GenerationRecord> records);

struct RunSummary {
  std::string label;
  double final_best = 0.0;
  double final_median = 0.0;
  double mean_auc = 0.0;  // trapezoidal area under the mean curve, unit spacing
};

RunSummary summarize(const std::string& label, std::span<const CurvePoint> curves);

struct ComparativeReport {
  std::vector<CurvePoint> lerl_curves;
  std::vector<CurvePoint> baseline_curves;
  std::vector<double> lerl_best_per_generation;
  std::vector<double> baseline_best_per_generation;
  /// lerl best / baseline best per generation; nullopt when the baseline best is zero.
  std::vector<std::optional<double>> best_ratio;
  std::vector<std::optional<double>> lerl_growth;
  std::vector<std::optional<double>> baseline_growth;
  RunSummary lerl_summary;
  RunSummary baseline_summary;
};

/// Both runs must come from the same budget and environment; callers check that
/// with `comparable_config_differences` first.
ComparativeReport comparative_report(std::span<const IterationRecord> lerl_iterations,
                                     std::span<const GenerationRecord> lerl_generations,
                                     std::span<const IterationRecord> baseline_iterations,
                                     std::span<const GenerationRecord> baseline_generations,
                                     std::size_t smooth_window);

}  // namespace lerl
