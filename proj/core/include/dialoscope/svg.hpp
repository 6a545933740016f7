#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dialoscope {

enum class ChartKind { Bars, Lines, Heatmap };

struct Series {
  std::string label;
  /// One value per x position; nullopt renders as a gap, never as a zero.
  std::vector<std::optional<double>> values;
};

struct ChartSpec {
  ChartKind kind = ChartKind::Bars;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> x_labels;  // category / column names
};

/// For heatmaps: series are rows, x_labels are columns, and `heat_levels`
/// carries the 4-level bucket index (0..3) per cell.
struct ChartData {
  std::vector<Series> series;
  std::vector<std::vector<int>> heat_levels;
};

/// Standalone SVG document. Bars use class "bar"; heatmap cells use classes
/// "lv0".."lv3" (closest to farthest). Numeric labels are limited to data
/// values, which always also appear in the originating CSV report. Throws
/// Error(Data) on an empty or inconsistent series set.
std::string render_chart(const ChartSpec& spec, const ChartData& data);

}  // namespace dialoscope
