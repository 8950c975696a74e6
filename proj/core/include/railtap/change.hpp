#pragma once

#include <cmath>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "railtap/templates.hpp"

namespace railtap {

inline const double kDefaultShapeThreshold = 0.15;
inline const double kDefaultVolumeThreshold = std::log(1.25);

/// Difference between two periods' templates for one station/direction/
/// day-class, decomposed into shape (distance between normalized means)
/// and volume (total ratio). `changed` is set when either component
/// crosses its threshold: shape_distance > shape_threshold or
/// |ln(volume_ratio)| > volume_threshold.
struct ChangeReport {
  StationId station;
  Direction direction = Direction::ENTRY;
  DayClass day_class = DayClass::WORKDAY;
  std::string period_a;
  std::string period_b;
  double shape_distance = 0.0;
  double volume_ratio = 1.0;
  std::vector<double> per_bin_delta;  // b - a, per bin
  bool changed = false;
};

/// Month span of a template ("2018-03" or "2018-03..2018-05"); "?" when the
/// template carries no month provenance.
std::string period_label(const UsageTemplate& tpl);

/// Compares two templates of the same station, direction, day class, and
/// bin config (Error{INCOMPATIBLE_TEMPLATES} otherwise); both must have a
/// nonzero total (Error{ZERO_TOTAL}).
ChangeReport diff_templates(const UsageTemplate& a, const UsageTemplate& b,
                            DistanceKind kind = DistanceKind::L2,
                            double shape_threshold = kDefaultShapeThreshold,
                            double volume_threshold = kDefaultVolumeThreshold);

/// One consecutive pair in a period sweep; `report` is empty and `error`
/// holds the reason when that pair could not be compared.
struct ChangePairResult {
  std::string period_a;
  std::string period_b;
  std::optional<ChangeReport> report;
  std::string error;
};

/// Diffs each consecutive pair of periods in key order (chronological for
/// "YYYY-MM" keys). Needs at least two periods (Error{INSUFFICIENT_INPUT});
/// per-pair failures are recorded, not thrown.
std::vector<ChangePairResult> change_matrix(
    const std::map<std::string, UsageTemplate>& templates_by_period,
    DistanceKind kind = DistanceKind::L2,
    double shape_threshold = kDefaultShapeThreshold,
    double volume_threshold = kDefaultVolumeThreshold);

/// CSV: `station,direction,day_class,period_a,period_b,shape_distance,
/// volume_ratio,changed,d0..dN`; all rows must share a bin count.
void write_changes_csv(std::ostream& out, std::span<const ChangeReport> reports);

}  // namespace railtap
