#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pidtune {

struct SvgSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color = "#1f77b4";
};

/// Horizontal band drawn behind the curves (settling envelope).
struct SvgBand {
  double y_lo = 0.0;
  double y_hi = 0.0;
};

struct SvgMarker {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

struct SvgPlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<SvgBand> band;
  std::optional<SvgMarker> marker;
  // Long series are thinned to roughly this many points; the CSV files stay
  // full resolution.
  std::size_t max_points = 1500;
};

/// Self-contained deterministic SVG line plot (no external plotting
/// dependency, no timestamps).
void write_svg_plot(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                    const SvgPlotOptions& options);

}  // namespace pidtune
