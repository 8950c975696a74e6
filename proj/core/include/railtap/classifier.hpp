#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "railtap/templates.hpp"

namespace railtap {

/// Local maximum of a template's mean vector. Prominence is the peak value
/// minus the higher of the two flanking minima (segments toward the
/// neighbouring reported peak or the vector edge).
struct Peak {
  int bin_index = 0;
  double value = 0.0;
  double prominence = 0.0;

  friend bool operator==(const Peak&, const Peak&) = default;
};

enum class MorphologyLabel {
  MORNING_PEAK,
  EVENING_PEAK,
  DUAL_PEAK,
  MIDDAY_DIP,
  NO_EVENING_PEAK,
  FLAT,
};

std::string_view to_token(MorphologyLabel label);
std::optional<MorphologyLabel> morphology_label_from_token(std::string_view token);

enum class Archetype {
  COMMUTER_ORIGIN,
  EMPLOYMENT_HUB,
  MIXED,
  UNCLASSIFIED,
};

std::string_view to_token(Archetype archetype);
std::optional<Archetype> archetype_from_token(std::string_view token);

/// Half-open wall-clock window in minutes of day.
struct MinuteWindow {
  int start_minute = 0;
  int end_minute = 0;

  friend bool operator==(const MinuteWindow&, const MinuteWindow&) = default;
};

/// Time-of-day windows and ratio thresholds for morphology labeling. The
/// three windows must not overlap. A bin belongs to a window when their
/// minute ranges intersect.
struct WindowConfig {
  MinuteWindow morning{6 * 60, 10 * 60};
  MinuteWindow evening{16 * 60, 20 * 60};
  MinuteWindow midday{12 * 60, 15 * 60};
  double peak_height_frac = 0.5;  // of max(mean_counts), in (0, 1]
  double dip_frac = 0.35;         // of the reference peak level, in (0, 1)

  void validate() const;
};

WindowConfig load_window_config(const std::string& path);

bool bin_in_window(int bin_index, const MinuteWindow& window, BinConfig config);

/// Strict local maxima of the template mean at or above
/// peak_height_frac * max(mean_counts), sorted by bin. A plateau counts as
/// one peak at its first bin and needs strictly lower values on both sides;
/// the first and last bins are never peaks.
std::vector<Peak> find_peaks(const UsageTemplate& t, const WindowConfig& cfg);

/// Morphology of one template:
///  - MORNING_PEAK / EVENING_PEAK: a reported peak lies in that window
///  - DUAL_PEAK: both of the above
///  - MIDDAY_DIP: reported peaks exist on both sides of the midday window
///    and the window minimum is at most dip_frac times the reference level
///    (mean of morning and evening peak values when both exist, else the
///    highest reported peak)
///  - NO_EVENING_PEAK: a morning or midday peak exists but no evening one
///  - FLAT: no peaks at all
std::set<MorphologyLabel> label_template(const UsageTemplate& t,
                                         const WindowConfig& cfg);

/// Labels and peaks for one (direction, day class) template.
struct ClassifiedGroup {
  Direction direction = Direction::ENTRY;
  DayClass day_class = DayClass::WORKDAY;
  std::set<MorphologyLabel> labels;
  std::vector<Peak> peaks;
};

struct StationClassification {
  StationId station;
  Archetype archetype = Archetype::UNCLASSIFIED;
  std::vector<ClassifiedGroup> groups;

  const ClassifiedGroup* find(Direction direction, DayClass day_class) const;
};

/// Applies the archetype decision rule to the workday templates (both
/// required; Error{INSUFFICIENT_INPUT} otherwise) and records labels for
/// every provided template. Rules, in precedence order:
///  1. COMMUTER_ORIGIN: entry MORNING_PEAK without DUAL_PEAK, exit EVENING_PEAK
///  2. EMPLOYMENT_HUB: entry DUAL_PEAK
///  3. MIXED: the entry mean has unthresholded local maxima in both the
///     morning and evening windows whose values are within a factor 1.5
///  4. UNCLASSIFIED otherwise
StationClassification classify_station(
    const std::optional<UsageTemplate>& entry_workday,
    const std::optional<UsageTemplate>& exit_workday,
    const std::optional<UsageTemplate>& entry_weekend,
    const std::optional<UsageTemplate>& exit_weekend,
    const WindowConfig& cfg);

/// CSV: one row per (direction, day class) group:
/// `station,archetype,direction,day_class,labels` with labels joined by ';'.
void write_classification_csv(std::ostream& out,
                              std::span<const StationClassification> items);
std::string format_classification_text(const StationClassification& item);

}  // namespace railtap
