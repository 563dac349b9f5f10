#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lempert::plot {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f77b4";
  bool line = true;
  bool markers = true;
};

// Standalone SVG line/scatter chart; no external renderer involved.
struct SvgPlot {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  int width = 640, height = 420;
  std::vector<Series> series;
  std::string filename = "plot.svg";

  void add(Series s) { series.push_back(std::move(s)); }
  std::string render() const;
  void save(const std::string& path) const;
};

}  // namespace lempert::plot
