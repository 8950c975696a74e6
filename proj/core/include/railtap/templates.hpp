#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "railtap/binning.hpp"
#include "railtap/dates.hpp"
#include "railtap/record.hpp"
#include "railtap/similarity.hpp"

namespace railtap {

/// Day grouping for template extraction: the coarse workday/weekend split
/// plus per-weekday classes.
enum class DayClass {
  WORKDAY,
  WEEKEND,
  MONDAY,
  TUESDAY,
  WEDNESDAY,
  THURSDAY,
  FRIDAY,
  SATURDAY,
  SUNDAY,
};

std::string_view to_token(DayClass day_class);
std::optional<DayClass> day_class_from_token(std::string_view token);

/// Calendar rules for day classification and group acceptance. Configured
/// holidays count as weekend-class regardless of weekday.
struct CalendarPolicy {
  std::set<Date> holidays;
  int min_support = 4;
  double tau = 0.2;  // coherence acceptance threshold

  /// Throws Error{BAD_CONFIG} on non-positive min_support or tau.
  void validate() const;
};

CalendarPolicy load_calendar_policy(const std::string& path);

struct DayClassification {
  DayClass coarse = DayClass::WORKDAY;  // WORKDAY or WEEKEND
  DayClass weekday = DayClass::MONDAY;  // MONDAY..SUNDAY

  bool is_workday() const { return coarse == DayClass::WORKDAY; }
};

DayClassification classify_day(Date date, const CalendarPolicy& policy);
DayClass weekday_class(std::chrono::weekday wd);
/// True when `cls` (coarse or per-weekday) contains the date's class.
bool in_day_class(Date date, DayClass cls, const CalendarPolicy& policy);

struct CoherenceResult {
  double coherence = 0.0;
  bool coherent = false;
};

/// Distance matrix over day profiles, labeled `<date>/<direction>`. With
/// normalize the distances compare per-bin shares instead of raw counts.
/// Error{INCOMPATIBLE_CONFIG} on mixed bin widths.
SimilarityMatrix pairwise_matrix(std::span<const DayProfile> profiles,
                                 DistanceKind kind, bool normalize);

/// Mean pairwise distance among the normalized profiles. Coherent when the
/// mean is within policy.tau and the group has at least min_support members.
/// Error{INSUFFICIENT_SUPPORT} for fewer than two profiles.
CoherenceResult check_coherence(std::span<const DayProfile> profiles,
                                DistanceKind kind,
                                const CalendarPolicy& policy);

/// Averaged day-class profile with per-bin spread. `months` records which
/// calendar months contributed, in ascending order without duplicates.
struct UsageTemplate {
  StationId station;
  Direction direction = Direction::ENTRY;
  DayClass day_class = DayClass::WORKDAY;
  BinConfig config;
  std::vector<double> mean_counts;
  std::vector<double> std_counts;
  int support = 0;
  double coherence = 0.0;
  bool coherent = false;
  std::vector<YearMonth> months;

  int bins() const { return static_cast<int>(mean_counts.size()); }
};

/// Averages a non-empty group of same-class profiles. mean is the per-bin
/// arithmetic mean of raw counts, std the per-bin sample standard deviation
/// (0 when support is 1). A template is produced even when the group fails
/// the coherence check; `coherent` records the verdict.
UsageTemplate extract_template(std::span<const DayProfile> profiles,
                               DayClass day_class,
                               const CalendarPolicy& policy,
                               DistanceKind kind = DistanceKind::L2);

/// CSV with `# key = value` metadata lines followed by bin,mean,std rows.
/// Writing then reading reproduces the template exactly.
void write_template_csv(std::ostream& out, const UsageTemplate& tpl);
UsageTemplate read_template_csv(std::istream& in,
                                std::string_view origin = "<stream>");

}  // namespace railtap
