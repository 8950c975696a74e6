#include "railtap/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "railtap/error.hpp"
#include "railtap/similarity.hpp"

namespace railtap {
namespace {

constexpr double kWidth = 720, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 30, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string hour_label(int minute_of_day) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60,
                minute_of_day % 60);
  return buf;
}

}  // namespace

std::string render_bar_svg(const SeriesPlot& plot) {
  if (plot.values.empty()) {
    throw Error(Errc::INSUFFICIENT_INPUT, "cannot plot an empty series");
  }
  std::size_t n = plot.values.size();
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  double max_v = *std::max_element(plot.values.begin(), plot.values.end());
  double scale = max_v > 0 ? plot_h / max_v : 0.0;
  double slot = plot_w / double(n);
  double bar_w = slot * 0.85;
  double inset = slot * 0.075;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  svg += "<title>" + escape(plot.title) + "</title>\n";
  svg += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"13\">" +
         escape(plot.title) + "</text>\n";

  for (std::size_t i = 0; i < n; ++i) {
    double v = std::max(0.0, plot.values[i]);
    double h = v * scale;
    double x = kLeft + double(i) * slot + inset;
    double y = kTop + plot_h - h;
    svg += "<rect class=\"bar\" data-bin=\"" + std::to_string(i) +
           "\" data-value=\"" + format_double_exact(plot.values[i]) +
           "\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
           num(bar_w) + "\" height=\"" + num(h) + "\" fill=\"#4878a8\"/>\n";
  }

  // axes
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + plot_h) +
         "\" x2=\"" + num(kLeft + plot_w) + "\" y2=\"" + num(kTop + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
         num(kLeft) + "\" y2=\"" + num(kTop + plot_h) +
         "\" stroke=\"black\"/>\n";

  // x ticks at each quarter of the day
  for (int q = 0; q <= 4; ++q) {
    std::size_t bin = std::min(n, n * std::size_t(q) / 4);
    double x = kLeft + double(bin) * slot;
    int minute = int(bin) * plot.bin_width_minutes;
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + plot_h + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           hour_label(minute) + "</text>\n";
  }

  // y extent labels
  svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + plot_h) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">0</text>\n";
  char maxbuf[32];
  std::snprintf(maxbuf, sizeof maxbuf, "%.6g", max_v);
  svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         maxbuf + "</text>\n";

  // axis captions
  svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" +
         num(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" +
         escape(plot.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " +
         num(kTop + plot_h / 2) + ")\">" +
         escape(plot.y_label) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace railtap
