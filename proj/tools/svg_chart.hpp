#pragma once

#include <string>
#include <utility>
#include <vector>

namespace unicr::cli {

/// Minimal standalone SVG line-chart writer; one polyline per series.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
};

std::string render_svg(const SvgChart& chart);
void write_svg(const SvgChart& chart, const std::string& path);

}  // namespace unicr::cli
