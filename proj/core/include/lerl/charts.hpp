#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lerl/metrics.hpp"

namespace lerl {

struct Series {
  std::string label;
  std::vector<double> values;  // one per iteration
};

struct LineChart {
  std::string title;
  std::string y_label;
  std::vector<Series> series;
};

/// Deterministic SVG text for one line chart. Throws UsageError if there is nothing to draw.
std::string render_svg(const LineChart& chart);

/// The three panels of a run: raw per-agent scores, mean with its smoothed
/// version, and best with median.
struct ChartSet {
  LineChart raw;
  LineChart mean;
  LineChart best_median;
};

ChartSet chart_set(const std::string& label, const ScoreMatrix& scores,
                   const std::vector<CurvePoint>& curves);
/// Overlays `other`'s series onto `into` (used for LERL vs baseline reports).
void merge_chart_sets(ChartSet& into, const ChartSet& other);

/// Writes raw_scores.svg, mean_scores.svg and best_median.svg into `directory`
/// and returns their paths.
std::vector<std::filesystem::path> render_charts(const ChartSet& charts,
                                                 const std::filesystem::path& directory);

}  // namespace lerl
