#pragma once

#include <span>
#include <string>
#include <vector>

namespace fmros::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // half-length of vertical error bars; empty for none
  bool line = true;
  bool points = false;
  bool dashed = false;
  std::string color;  // auto-assigned from a palette when empty
};

// Self-contained line/scatter chart. When x_tick_labels is non-empty the x
// axis is categorical: series x values index into the labels.
struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<std::string> x_tick_labels;
  std::vector<double> x_separators;  // dashed vertical markers (x coordinate)
  double width = 880;
  double height = 520;
};

void write_chart_svg(const Chart& chart, const std::string& path);

// Panels laid out left to right in one document.
void write_panels_svg(std::span<const Chart> panels, const std::string& path);

}  // namespace fmros::svg
