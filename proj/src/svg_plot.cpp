#include "pidtune/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pidtune {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// Round the raw step to a 1/2/5 decade multiple.
double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.5) {
    step = 1.0;
  } else if (frac <= 3.5) {
    step = 2.0;
  } else if (frac <= 7.5) {
    step = 5.0;
  }
  return step * mag;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                    const SvgPlotOptions& options) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!any) {
        x_min = x_max = s.xs[i];
        y_min = y_max = s.ys[i];
        any = true;
      } else {
        x_min = std::min(x_min, s.xs[i]);
        x_max = std::max(x_max, s.xs[i]);
        y_min = std::min(y_min, s.ys[i]);
        y_max = std::max(y_max, s.ys[i]);
      }
    }
  }
  if (options.band) {
    y_min = std::min(y_min, options.band->y_lo);
    y_max = std::max(y_max, options.band->y_hi);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double y_pad = 0.06 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (options.band) {
    out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(py(options.band->y_hi))
        << "\" width=\"" << num(plot_w) << "\" height=\""
        << num(py(options.band->y_lo) - py(options.band->y_hi))
        << "\" fill=\"#dddddd\" opacity=\"0.6\"/>\n";
  }

  // Grid and ticks.
  const double x_step = nice_step(x_max - x_min, 8);
  const double y_step = nice_step(y_max - y_min, 6);
  out << "<g stroke=\"#cccccc\" stroke-width=\"0.5\" font-size=\"12\" font-family=\"sans-serif\">\n";
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9 * x_step; x += x_step) {
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kMarginTop) << "\" x2=\"" << num(px(x))
        << "\" y2=\"" << num(kMarginTop + plot_h) << "\"/>\n";
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kMarginTop + plot_h + 18)
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">" << num(x) << "</text>\n";
  }
  for (double y = std::ceil(y_min / y_step) * y_step; y <= y_max + 1e-9 * y_step; y += y_step) {
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\""
        << num(kMarginLeft + plot_w) << "\" y2=\"" << num(py(y)) << "\"/>\n";
    out << "<text x=\"" << num(kMarginLeft - 8) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">" << num(y) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (const auto& s : series) {
    const std::size_t n = s.xs.size();
    if (n == 0) continue;
    const std::size_t stride = std::max<std::size_t>(1, n / options.max_points);
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      out << num(px(s.xs[i])) << ',' << num(py(s.ys[i])) << ' ';
    }
    if ((n - 1) % stride != 0) out << num(px(s.xs[n - 1])) << ',' << num(py(s.ys[n - 1]));
    out << "\"/>\n";
  }

  if (options.marker) {
    out << "<circle cx=\"" << num(px(options.marker->x)) << "\" cy=\"" << num(py(options.marker->y))
        << "\" r=\"4\" fill=\"#d62728\"/>\n";
    out << "<text x=\"" << num(px(options.marker->x) + 8) << "\" y=\""
        << num(py(options.marker->y) - 8) << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << options.marker->label << "</text>\n";
  }

  // Legend and labels.
  double legend_y = kMarginTop + 16;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    out << "<line x1=\"" << num(kMarginLeft + 12) << "\" y1=\"" << num(legend_y - 4) << "\" x2=\""
        << num(kMarginLeft + 40) << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(kMarginLeft + 46) << "\" y=\"" << num(legend_y)
        << "\" font-size=\"13\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    legend_y += 18;
  }
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">"
      << options.title << "</text>\n";
  out << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
      << options.x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << num(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 18 "
      << num(kMarginTop + plot_h / 2) << ")\">" << options.y_label << "</text>\n";
  out << "</svg>\n";
}

}  // namespace pidtune
