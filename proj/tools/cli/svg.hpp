#pragma once

#include <string>
#include <utility>
#include <vector>

namespace careertrace::cli {

struct LineSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), x ascending
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string line_chart(const std::string& title, const std::string& y_label, const std::vector<LineSeries>& series);

struct BarGroup {
  std::string label;
  std::vector<double> values;  // one per bar series
};

/// Grouped bars, or one stacked bar per group when `stacked`.
std::string bar_chart(const std::string& title, const std::string& y_label, const std::vector<std::string>& series,
                      const std::vector<BarGroup>& groups, bool stacked);

}  // namespace careertrace::cli
