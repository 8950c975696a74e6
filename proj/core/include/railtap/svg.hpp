#pragma once

#include <string>
#include <vector>

namespace railtap {

/// One time-of-day series to render as a bar chart.
struct SeriesPlot {
  std::string title;
  std::string x_label = "time of day";
  std::string y_label = "passengers";
  int bin_width_minutes = 60;
  std::vector<double> values;
};

/// Self-contained SVG 1.1 bar chart. One `<rect class="bar">` per bin with
/// data-bin / data-value attributes; byte-deterministic for fixed input.
/// Throws Error{INSUFFICIENT_INPUT} for an empty series.
std::string render_bar_svg(const SeriesPlot& plot);

}  // namespace railtap
