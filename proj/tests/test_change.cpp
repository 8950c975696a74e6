#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "railtap/change.hpp"

using namespace railtap;
using railtap::test::month;

namespace {

UsageTemplate make_template(std::vector<double> means,
                            Direction dir = Direction::ENTRY,
                            DayClass cls = DayClass::WORKDAY,
                            const std::string& station = "S1") {
  UsageTemplate t;
  t.station.id = station;
  t.direction = dir;
  t.day_class = cls;
  t.config = BinConfig{int(1440 / means.size())};
  t.std_counts.assign(means.size(), 0.0);
  t.mean_counts = std::move(means);
  t.support = 5;
  t.coherent = true;
  return t;
}

const std::vector<double> kMorningSpike = {0, 0, 0, 0, 0, 0, 50, 45, 10, 5, 4, 4,
                                           3, 3, 4,  5, 6, 8, 7,  5, 3, 2, 1, 0};
// kMorningSpike shifted two bins later in the day; same total (165).
const std::vector<double> kMorningSpikeLate = {1, 0, 0, 0, 0, 0, 0, 0, 50, 45, 10, 5,
                                               4, 4, 3, 3, 4, 5, 6, 8, 7,  5,  3, 2};

}  // namespace

TEST_SUITE_BEGIN("change");

TEST_CASE("identical templates produce a null report") {
  auto a = make_template(kMorningSpike);
  auto b = a;
  b.months = {month(2018, 4)};
  a.months = {month(2018, 3)};

  auto r = diff_templates(a, b);
  CHECK(r.shape_distance == 0.0);
  CHECK(r.volume_ratio == 1.0);
  CHECK_FALSE(r.changed);
  CHECK(r.period_a == "2018-03");
  CHECK(r.period_b == "2018-04");
  REQUIRE(r.per_bin_delta.size() == 24);
  for (double d : r.per_bin_delta) CHECK(d == 0.0);
}

TEST_CASE("a pure volume change keeps shape at zero") {
  auto a = make_template(kMorningSpike);
  std::vector<double> doubled = kMorningSpike;
  for (double& v : doubled) v *= 2.0;
  auto b = make_template(doubled);

  auto r = diff_templates(a, b, DistanceKind::L2, kDefaultShapeThreshold,
                          std::log(1.5));
  CHECK(r.shape_distance == 0.0);
  CHECK(r.volume_ratio == 2.0);
  // ln(2) = 0.693 crosses the ln(1.5) = 0.405 volume threshold.
  CHECK(r.changed);
  CHECK(r.per_bin_delta[6] == 50.0);

  // At the default ln(1.25) threshold a doubling also counts as change.
  CHECK(diff_templates(a, b).changed);
}

TEST_CASE("a two-bin shift moves shape but not volume") {
  auto a = make_template(kMorningSpike);
  auto b = make_template(kMorningSpikeLate);

  auto r = diff_templates(a, b);
  // L2 between the two share vectors, computed independently from the
  // exact fractions (entries are /165).
  CHECK(r.shape_distance == doctest::Approx(0.5361495892023387).epsilon(1e-12));
  CHECK(r.volume_ratio == 1.0);
  CHECK(r.changed);  // 0.536 > 0.15 shape threshold
}

TEST_CASE("swapping the periods mirrors the report") {
  auto a = make_template(kMorningSpike);
  auto b = make_template(kMorningSpikeLate);
  std::vector<double> scaled = kMorningSpikeLate;
  for (double& v : scaled) v *= 3.0;
  b.mean_counts = scaled;

  auto ab = diff_templates(a, b);
  auto ba = diff_templates(b, a);
  CHECK(ab.shape_distance == ba.shape_distance);
  CHECK(ab.volume_ratio == doctest::Approx(1.0 / ba.volume_ratio).epsilon(1e-12));
  CHECK(ab.changed == ba.changed);
  for (size_t i = 0; i < ab.per_bin_delta.size(); ++i)
    CHECK(ab.per_bin_delta[i] == -ba.per_bin_delta[i]);
}

TEST_CASE("shape distance ignores uniform scale") {
  auto a = make_template(kMorningSpike);

  std::vector<double> twice = kMorningSpike;
  for (double& v : twice) v *= 2.0;
  auto b2 = make_template(twice);
  // Doubling every bin leaves the share vector bitwise identical.
  CHECK(diff_templates(a, b2).shape_distance == 0.0);

  std::vector<double> thrice = kMorningSpike;
  for (double& v : thrice) v *= 3.0;
  auto b3 = make_template(thrice);
  CHECK(diff_templates(a, b3).shape_distance ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(diff_templates(a, b3).volume_ratio == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("incompatible templates are rejected") {
  auto a = make_template(kMorningSpike);

  auto other_station = make_template(kMorningSpike, Direction::ENTRY,
                                     DayClass::WORKDAY, "S2");
  CHECK_THROWS_AS(diff_templates(a, other_station), Error);

  auto other_dir = make_template(kMorningSpike, Direction::EXIT);
  CHECK_THROWS_AS(diff_templates(a, other_dir), Error);

  auto other_class = make_template(kMorningSpike, Direction::ENTRY,
                                   DayClass::WEEKEND);
  CHECK_THROWS_AS(diff_templates(a, other_class), Error);

  auto other_width = make_template({1, 2, 3, 4});
  try {
    diff_templates(a, other_width);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::INCOMPATIBLE_TEMPLATES);
  }
}

TEST_CASE("zero-total templates cannot be compared") {
  auto a = make_template(kMorningSpike);
  auto zero = make_template(std::vector<double>(24, 0.0));
  try {
    diff_templates(a, zero);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZERO_TOTAL);
  }
  CHECK_THROWS_AS(diff_templates(zero, a), Error);
}

TEST_CASE("change_matrix walks consecutive period pairs") {
  std::map<std::string, UsageTemplate> periods;
  auto stable = make_template(kMorningSpike);
  periods["2018-03"] = stable;
  periods["2018-04"] = stable;
  periods["2018-05"] = stable;

  auto results = change_matrix(periods);
  REQUIRE(results.size() == 2);
  CHECK(results[0].period_a == "2018-03");
  CHECK(results[0].period_b == "2018-04");
  CHECK(results[1].period_a == "2018-04");
  CHECK(results[1].period_b == "2018-05");
  for (const auto& pr : results) {
    REQUIRE(pr.report.has_value());
    CHECK(pr.error.empty());
    CHECK_FALSE(pr.report->changed);
    // Pair labels come from the map keys, not template months.
    CHECK(pr.report->period_a == pr.period_a);
    CHECK(pr.report->period_b == pr.period_b);
  }
}

TEST_CASE("change_matrix flags only the pair that moved") {
  std::map<std::string, UsageTemplate> periods;
  periods["2018-03"] = make_template(kMorningSpike);
  periods["2018-04"] = make_template(kMorningSpike);
  periods["2018-05"] = make_template(kMorningSpikeLate);

  auto results = change_matrix(periods);
  REQUIRE(results.size() == 2);
  CHECK_FALSE(results[0].report->changed);
  CHECK(results[1].report->changed);
}

TEST_CASE("change_matrix records per-pair failures without aborting") {
  std::map<std::string, UsageTemplate> periods;
  periods["2018-03"] = make_template(kMorningSpike);
  periods["2018-04"] = make_template(std::vector<double>(24, 0.0));
  periods["2018-05"] = make_template(kMorningSpike);

  auto results = change_matrix(periods);
  REQUIRE(results.size() == 2);
  CHECK_FALSE(results[0].report.has_value());
  CHECK_FALSE(results[0].error.empty());
  CHECK_FALSE(results[1].report.has_value());
  CHECK_FALSE(results[1].error.empty());
}

TEST_CASE("change_matrix needs at least two periods") {
  std::map<std::string, UsageTemplate> periods;
  periods["2018-03"] = make_template(kMorningSpike);
  try {
    change_matrix(periods);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::INSUFFICIENT_INPUT);
  }
  CHECK_THROWS_AS(change_matrix({}), Error);
}

TEST_CASE("period_label spells out the month span") {
  auto t = make_template(kMorningSpike);
  CHECK(period_label(t) == "?");

  t.months = {month(2018, 3)};
  CHECK(period_label(t) == "2018-03");

  t.months = {month(2018, 3), month(2018, 4), month(2018, 5)};
  CHECK(period_label(t) == "2018-03..2018-05");
}

TEST_CASE("changes CSV lays out one row per report") {
  auto a = make_template({10, 20, 30, 40}, Direction::ENTRY);
  std::vector<double> shifted = {40, 10, 20, 30};
  auto b = make_template(shifted, Direction::ENTRY);
  a.months = {month(2018, 3)};
  b.months = {month(2018, 4)};

  std::vector<ChangeReport> reports{diff_templates(a, b)};
  std::ostringstream out;
  write_changes_csv(out, reports);
  std::string text = out.str();

  std::istringstream lines(text);
  std::string header, row, extra;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK_FALSE(std::getline(lines, extra));

  CHECK(header ==
        "station,direction,day_class,period_a,period_b,shape_distance,"
        "volume_ratio,changed,d0,d1,d2,d3");
  CHECK(row.substr(0, row.find(',')) == "S1");
  CHECK(row.find("ENTRY") != std::string::npos);
  CHECK(row.find("WORKDAY") != std::string::npos);
  CHECK(row.find("2018-03,2018-04") != std::string::npos);
  CHECK(row.find(",true,") != std::string::npos);
  // Deltas are b - a per bin.
  CHECK(row.find("30,-10,-10,-10") != std::string::npos);
}

TEST_SUITE_END();
