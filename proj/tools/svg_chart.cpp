#include "svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace unicr::cli {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::string render_svg(const SvgChart& chart) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : chart.series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  y_min = std::min(y_min, 0.0);

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << chart.title << "</text>\n";

  // Axes with five ticks per side.
  out << "<g stroke=\"#333\" stroke-width=\"1\" font-size=\"11\" fill=\"#333\">\n";
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
      << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n";
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 5.0;
    const double fy = y_min + (y_max - y_min) * i / 5.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << px(fx)
        << "\" y2=\"" << kMarginTop + plot_h + 4 << "\"/>\n";
    out << "<text x=\"" << px(fx) << "\" y=\"" << kMarginTop + plot_h + 16
        << "\" text-anchor=\"middle\" stroke=\"none\">" << fmt(fx) << "</text>\n";
    out << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << py(fy) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << py(fy) << "\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" stroke=\"none\">" << fmt(fy) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">" << chart.x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << chart.y_label << "</text>\n";

  int color = 0;
  double legend_y = kMarginTop + 8;
  for (const auto& s : chart.series) {
    const char* stroke = kColors[color % 8];
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << fmt(px(x)) << "," << fmt(py(y)) << " ";
    }
    out << "\"/>\n";
    out << "<line x1=\"" << kMarginLeft + plot_w - 130 << "\" y1=\"" << legend_y << "\" x2=\""
        << kMarginLeft + plot_w - 110 << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w - 104 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"11\">" << s.label << "</text>\n";
    legend_y += 16;
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const SvgChart& chart, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write SVG file: " + path);
  out << render_svg(chart);
}

}  // namespace unicr::cli
