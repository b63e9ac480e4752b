#pragma once

// Bare-bones standalone SVG charts: polylines and bar columns on linear axes.

#include <string>
#include <vector>

namespace tdefl::cli {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool columns = false;  // bars instead of a polyline
};

struct Chart {
  std::string title, xlabel, ylabel;
  std::vector<Series> series;
};

std::string render_svg(const Chart& chart, int width = 640, int height = 420);

}  // namespace tdefl::cli
