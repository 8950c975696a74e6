#include <doctest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "railtap/svg.hpp"

using namespace railtap;

namespace {

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// Pulls attribute values of every `<rect class="bar">` in document order.
std::vector<double> bar_attribute(const std::string& svg,
                                  const std::string& attr) {
  std::vector<double> out;
  std::string bar_open = "<rect class=\"bar\"";
  std::string key = attr + "=\"";
  for (std::size_t pos = svg.find(bar_open); pos != std::string::npos;
       pos = svg.find(bar_open, pos + 1)) {
    std::size_t end = svg.find("/>", pos);
    REQUIRE(end != std::string::npos);
    std::string tag = svg.substr(pos, end - pos);
    std::size_t at = tag.find(key);
    REQUIRE(at != std::string::npos);
    std::size_t start = at + key.size();
    std::size_t quote = tag.find('"', start);
    REQUIRE(quote != std::string::npos);
    out.push_back(std::strtod(tag.substr(start, quote - start).c_str(), nullptr));
  }
  return out;
}

const std::vector<double> kDualPeak = {0, 0, 0, 0, 0, 0, 2,  30, 20, 8,  5, 4,
                                       2, 3, 6, 10, 18, 28, 26, 12, 6, 3, 1, 0};

}  // namespace

TEST_SUITE_BEGIN("svg");

TEST_CASE("one bar per bin, with axis captions") {
  SeriesPlot plot;
  plot.title = "S1 ENTRY WORKDAY";
  plot.values = kDualPeak;
  std::string svg = render_bar_svg(plot);

  CHECK(count_occurrences(svg, "<rect class=\"bar\"") == 24);
  CHECK(svg.find("time of day") != std::string::npos);
  CHECK(svg.find("passengers") != std::string::npos);
  CHECK(svg.find("<title>S1 ENTRY WORKDAY</title>") != std::string::npos);
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("rendering is deterministic") {
  SeriesPlot plot;
  plot.title = "repeat";
  plot.values = kDualPeak;
  CHECK(render_bar_svg(plot) == render_bar_svg(plot));
}

TEST_CASE("bars carry exact data values in bin order") {
  SeriesPlot plot;
  plot.title = "readback";
  plot.values = kDualPeak;
  std::string svg = render_bar_svg(plot);

  auto bins = bar_attribute(svg, "data-bin");
  auto values = bar_attribute(svg, "data-value");
  REQUIRE(bins.size() == 24);
  REQUIRE(values.size() == 24);
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(bins[i] == double(i));
    CHECK(values[i] == kDualPeak[i]);
  }
}

TEST_CASE("bar geometry mirrors the data") {
  SeriesPlot plot;
  plot.title = "geometry";
  plot.values = kDualPeak;
  std::string svg = render_bar_svg(plot);

  auto heights = bar_attribute(svg, "height");
  auto xs = bar_attribute(svg, "x");
  REQUIRE(heights.size() == 24);

  // The tallest bar is the morning peak; the evening peak is second.
  std::size_t tallest = 0, second = 0;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (heights[i] > heights[tallest]) tallest = i;
  }
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (i != tallest && heights[i] > heights[second]) second = i;
  }
  CHECK(tallest == 7);
  CHECK(second == 17);

  // Zero bins render as zero-height bars; x advances monotonically.
  CHECK(heights[0] == 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
}

TEST_CASE("an all-zero series still renders flat bars") {
  SeriesPlot plot;
  plot.title = "flatline";
  plot.values = std::vector<double>(24, 0.0);
  std::string svg = render_bar_svg(plot);
  auto heights = bar_attribute(svg, "height");
  REQUIRE(heights.size() == 24);
  for (double h : heights) CHECK(h == 0.0);
}

TEST_CASE("an empty series cannot be plotted") {
  SeriesPlot plot;
  plot.title = "empty";
  try {
    render_bar_svg(plot);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::INSUFFICIENT_INPUT);
  }
}

TEST_CASE("titles are XML-escaped") {
  SeriesPlot plot;
  plot.title = "A<B & \"C\">D";
  plot.values = {1, 2, 3};
  std::string svg = render_bar_svg(plot);
  CHECK(svg.find("A&lt;B &amp; &quot;C&quot;&gt;D") != std::string::npos);
  CHECK(svg.find("A<B") == std::string::npos);
}

TEST_CASE("tick labels span the day for wide bins") {
  SeriesPlot plot;
  plot.title = "wide";
  plot.bin_width_minutes = 360;
  plot.values = {5, 10, 8, 3};
  std::string svg = render_bar_svg(plot);
  CHECK(svg.find(">00:00<") != std::string::npos);
  CHECK(svg.find(">12:00<") != std::string::npos);
  CHECK(count_occurrences(svg, "<rect class=\"bar\"") == 4);
}

TEST_SUITE_END();
