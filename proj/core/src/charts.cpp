#include "lerl/charts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "lerl/errors.hpp"

namespace lerl {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  std::size_t points = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : chart.series) {
    points = std::max(points, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (points == 0 || !std::isfinite(lo)) throw UsageError("chart '" + chart.title + "' has no data");
  if (hi == lo) {
    hi += 0.5;
    lo -= 0.5;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double x_span = points > 1 ? static_cast<double>(points - 1) : 1.0;
  const auto x_of = [&](std::size_t i) { return kLeft + plot_w * static_cast<double>(i) / x_span; };
  const auto y_of = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight, kWidth, kHeight);
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, kHeight);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + plot_w / 2, escape(chart.title));
  svg += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
      kLeft, kTop, plot_w, plot_h);

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = lo + (hi - lo) * tick / 4.0;
    const double y = y_of(v);
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.2f}\" x2=\"{:.1f}\" y2=\"{:.2f}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{:.1f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
        kLeft, y, kLeft + plot_w, y, kLeft - 6, y + 4, v);
  }
  for (int tick = 0; tick <= 4; ++tick) {
    const auto i = static_cast<std::size_t>(std::llround(x_span * tick / 4.0));
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", x_of(i),
                       kTop + plot_h + 18, i);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">iteration</text>\n",
                     kLeft + plot_w / 2, kHeight - 10);
  svg += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1f})\">{}</text>\n",
      kTop + plot_h / 2, kTop + plot_h / 2, escape(chart.y_label));

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const auto& series = chart.series[s];
    const char* color = kPalette[s % kPalette.size()];
    std::string path;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
      if (!std::isfinite(series.values[i])) continue;
      path += fmt::format("{}{:.2f},{:.2f}", path.empty() ? "M" : " L", x_of(i), y_of(series.values[i]));
    }
    if (!path.empty()) {
      svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", path, color);
    }
    const double ly = kTop + 14.0 + 16.0 * static_cast<double>(s);
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n"
        "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n",
        kWidth - kRight + 12, ly, kWidth - kRight + 32, ly, color, kWidth - kRight + 38, ly + 4,
        escape(series.label));
  }
  svg += "</svg>\n";
  return svg;
}

ChartSet chart_set(const std::string& label, const ScoreMatrix& scores,
                   const std::vector<CurvePoint>& curves) {
  ChartSet set;
  set.raw = {"Per-agent evaluation score", "score", {}};
  for (std::size_t a = 0; a < scores.size(); ++a) {
    set.raw.series.push_back({fmt::format("{} agent {}", label, a), scores[a]});
  }
  Series mean{label + " mean", {}};
  Series smooth{label + " smoothed", {}};
  Series best{label + " best", {}};
  Series median{label + " median", {}};
  for (const auto& p : curves) {
    mean.values.push_back(p.mean);
    smooth.values.push_back(p.smoothed_mean);
    best.values.push_back(p.best);
    median.values.push_back(p.median);
  }
  set.mean = {"Mean evaluation score", "score", {mean, smooth}};
  set.best_median = {"Best and median evaluation score", "score", {best, median}};
  return set;
}

void merge_chart_sets(ChartSet& into, const ChartSet& other) {
  const auto append = [](LineChart& a, const LineChart& b) {
    a.series.insert(a.series.end(), b.series.begin(), b.series.end());
  };
  append(into.raw, other.raw);
  append(into.mean, other.mean);
  append(into.best_median, other.best_median);
}

std::vector<std::filesystem::path> render_charts(const ChartSet& charts,
                                                 const std::filesystem::path& directory) {
  const std::array<std::pair<const LineChart*, const char*>, 3> panels = {{
      {&charts.raw, "raw_scores.svg"},
      {&charts.mean, "mean_scores.svg"},
      {&charts.best_median, "best_median.svg"},
  }};
  std::vector<std::filesystem::path> written;
  for (const auto& [chart, name] : panels) {
    const std::string svg = render_svg(*chart);
    const auto path = directory / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write chart " + path.string());
    out << svg;
    if (!out) throw std::runtime_error("failed writing chart " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace lerl
