#include "lerl/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "lerl/errors.hpp"

namespace lerl {

std::vector<CurvePoint> aggregate_curves(const ScoreMatrix& per_agent_scores, std::size_t smooth_window) {
  if (smooth_window < 1) throw UsageError("smoothing window must be at least 1");
  if (per_agent_scores.empty() || per_agent_scores.front().empty()) {
    throw UsageError("cannot aggregate an empty score matrix");
  }
  const std::size_t agents = per_agent_scores.size();
  const std::size_t iterations = per_agent_scores.front().size();
  for (const auto& row : per_agent_scores) {
    if (row.size() != iterations) throw UsageError("score matrix rows differ in length");
  }

  std::vector<CurvePoint> curves(iterations);
  std::vector<double> column(agents);
  for (std::size_t t = 0; t < iterations; ++t) {
    for (std::size_t a = 0; a < agents; ++a) column[a] = per_agent_scores[a][t];
    std::ranges::sort(column);
    CurvePoint& p = curves[t];
    p.iteration = t;
    p.best = column.back();
    p.median = agents % 2 == 1 ? column[agents / 2]
                               : (column[agents / 2 - 1] + column[agents / 2]) / 2.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < agents; ++a) sum += per_agent_scores[a][t];
    p.mean = sum / static_cast<double>(agents);
  }
  for (std::size_t t = 0; t < iterations; ++t) {
    const std::size_t first = t + 1 >= smooth_window ? t + 1 - smooth_window : 0;
    double sum = 0.0;
    for (std::size_t k = first; k <= t; ++k) sum += curves[k].mean;
    curves[t].smoothed_mean = sum / static_cast<double>(t + 1 - first);
  }
  return curves;
}

std::vector<std::optional<double>> growth_rate(std::span<const double> best_per_generation) {
  std::vector<std::optional<double>> ratios;
  for (std::size_t g = 1; g < best_per_generation.size(); ++g) {
    const double previous = best_per_generation[g - 1];
    if (previous == 0.0) {
      ratios.emplace_back(std::nullopt);
    } else {
      ratios.emplace_back(best_per_generation[g] / previous);
    }
  }
  return ratios;
}

ScoreMatrix score_matrix(std::span<const IterationRecord> records) {
  std::size_t agents = 0;
  std::size_t iterations = 0;
  for (const auto& r : records) {
    agents = std::max(agents, r.agent_id + 1);
    iterations = std::max(iterations, r.iteration + 1);
  }
  ScoreMatrix matrix(agents, std::vector<double>(iterations, 0.0));
  std::vector<std::size_t> filled(agents, 0);
  for (const auto& r : records) {
    matrix[r.agent_id][r.iteration] = r.eval_score;
    ++filled[r.agent_id];
  }
  for (std::size_t a = 0; a < agents; ++a) {
    if (filled[a] != iterations) throw UsageError("iteration log is missing records");
  }
  return matrix;
}

std::vector<double> best_per_generation(std::span<const GenerationRecord> records) {
  std::vector<double> best;
  for (const auto& r : records) {
    if (r.generation >= best.size()) best.resize(r.generation + 1, -std::numeric_limits<double>::infinity());
    best[r.generation] = std::max(best[r.generation], r.raw_score);
  }
  return best;
}

RunSummary summarize(const std::string& label, std::span<const CurvePoint> curves) {
  if (curves.empty()) throw UsageError("cannot summarize empty curves");
  RunSummary s;
  s.label = label;
  s.final_best = curves.back().best;
  s.final_median = curves.back().median;
  for (std::size_t t = 1; t < curves.size(); ++t) {
    s.mean_auc += (curves[t - 1].mean + curves[t].mean) / 2.0;
  }
  return s;
}

ComparativeReport comparative_report(std::span<const IterationRecord> lerl_iterations,
                                     std::span<const GenerationRecord> lerl_generations,
                                     std::span<const IterationRecord> baseline_iterations,
                                     std::span<const GenerationRecord> baseline_generations,
                                     std::size_t smooth_window) {
  ComparativeReport report;
  report.lerl_curves = aggregate_curves(score_matrix(lerl_iterations), smooth_window);
  report.baseline_curves = aggregate_curves(score_matrix(baseline_iterations), smooth_window);
  if (report.lerl_curves.size() != report.baseline_curves.size()) {
    throw UsageError("runs cover different numbers of iterations");
  }
  report.lerl_best_per_generation = best_per_generation(lerl_generations);
  report.baseline_best_per_generation = best_per_generation(baseline_generations);
  if (report.lerl_best_per_generation.size() != report.baseline_best_per_generation.size()) {
    throw UsageError("runs cover different numbers of generations");
  }
  for (std::size_t g = 0; g < report.lerl_best_per_generation.size(); ++g) {
    const double denominator = report.baseline_best_per_generation[g];
    if (denominator == 0.0) {
      report.best_ratio.emplace_back(std::nullopt);
    } else {
      report.best_ratio.emplace_back(report.lerl_best_per_generation[g] / denominator);
    }
  }
  report.lerl_growth = growth_rate(report.lerl_best_per_generation);
  report.baseline_growth = growth_rate(report.baseline_best_per_generation);
  report.lerl_summary = summarize("lerl", report.lerl_curves);
  report.baseline_summary = summarize("baseline", report.baseline_curves);
  return report;
}

}  // namespace lerl
