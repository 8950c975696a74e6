#include "railtap/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "railtap/config.hpp"
#include "railtap/error.hpp"

namespace railtap {
namespace {

/// Strict local maxima with plateau handling, no height filter. A plateau
/// reports its first bin and must not touch either end of the vector.
std::vector<Peak> raw_maxima(std::span<const double> v) {
  std::vector<Peak> out;
  std::size_t n = v.size();
  std::size_t i = 1;
  while (i + 1 <= n - 1 && i < n) {
    if (v[i] > v[i - 1]) {
      std::size_t j = i;
      while (j + 1 < n && v[j + 1] == v[i]) ++j;
      if (j + 1 < n && v[j + 1] < v[i]) {
        out.push_back(Peak{int(i), v[i], 0.0});
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

void fill_prominence(std::vector<Peak>& peaks, std::span<const double> v) {
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    std::size_t lo = k == 0 ? 0 : std::size_t(peaks[k - 1].bin_index);
    std::size_t hi =
        k + 1 == peaks.size() ? v.size() - 1 : std::size_t(peaks[k + 1].bin_index);
    double left = v[lo], right = v[hi];
    for (std::size_t i = lo; i < std::size_t(peaks[k].bin_index); ++i) {
      left = std::min(left, v[i]);
    }
    for (std::size_t i = std::size_t(peaks[k].bin_index) + 1; i <= hi; ++i) {
      right = std::min(right, v[i]);
    }
    peaks[k].prominence = peaks[k].value - std::max(left, right);
  }
}

void check_window(const MinuteWindow& w, std::string_view name) {
  if (w.start_minute < 0 || w.end_minute > 1440 ||
      w.start_minute >= w.end_minute) {
    throw Error(Errc::BAD_CONFIG,
                std::string(name) + " window must satisfy 0 <= start < end <= 1440");
  }
}

bool windows_overlap(const MinuteWindow& a, const MinuteWindow& b) {
  return a.start_minute < b.end_minute && b.start_minute < a.end_minute;
}

double max_value_in_window(std::span<const Peak> peaks, const MinuteWindow& w,
                           BinConfig config, bool* found) {
  double best = 0.0;
  *found = false;
  for (const Peak& p : peaks) {
    if (bin_in_window(p.bin_index, w, config)) {
      best = *found ? std::max(best, p.value) : p.value;
      *found = true;
    }
  }
  return best;
}

}  // namespace

std::string_view to_token(MorphologyLabel label) {
  switch (label) {
    case MorphologyLabel::MORNING_PEAK: return "MORNING_PEAK";
    case MorphologyLabel::EVENING_PEAK: return "EVENING_PEAK";
    case MorphologyLabel::DUAL_PEAK: return "DUAL_PEAK";
    case MorphologyLabel::MIDDAY_DIP: return "MIDDAY_DIP";
    case MorphologyLabel::NO_EVENING_PEAK: return "NO_EVENING_PEAK";
    case MorphologyLabel::FLAT: return "FLAT";
  }
  return "FLAT";
}

std::optional<MorphologyLabel> morphology_label_from_token(
    std::string_view token) {
  static constexpr MorphologyLabel all[] = {
      MorphologyLabel::MORNING_PEAK, MorphologyLabel::EVENING_PEAK,
      MorphologyLabel::DUAL_PEAK,    MorphologyLabel::MIDDAY_DIP,
      MorphologyLabel::NO_EVENING_PEAK, MorphologyLabel::FLAT,
  };
  for (MorphologyLabel l : all) {
    if (to_token(l) == token) return l;
  }
  return {};
}

std::string_view to_token(Archetype archetype) {
  switch (archetype) {
    case Archetype::COMMUTER_ORIGIN: return "COMMUTER_ORIGIN";
    case Archetype::EMPLOYMENT_HUB: return "EMPLOYMENT_HUB";
    case Archetype::MIXED: return "MIXED";
    case Archetype::UNCLASSIFIED: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

std::optional<Archetype> archetype_from_token(std::string_view token) {
  static constexpr Archetype all[] = {
      Archetype::COMMUTER_ORIGIN, Archetype::EMPLOYMENT_HUB, Archetype::MIXED,
      Archetype::UNCLASSIFIED,
  };
  for (Archetype a : all) {
    if (to_token(a) == token) return a;
  }
  return {};
}

void WindowConfig::validate() const {
  check_window(morning, "morning");
  check_window(evening, "evening");
  check_window(midday, "midday");
  if (windows_overlap(morning, evening) || windows_overlap(morning, midday) ||
      windows_overlap(midday, evening)) {
    throw Error(Errc::BAD_CONFIG, "classification windows must not overlap");
  }
  if (!(peak_height_frac > 0) || peak_height_frac > 1) {
    throw Error(Errc::BAD_CONFIG, "peak_height_frac must be in (0, 1]");
  }
  if (!(dip_frac > 0) || dip_frac >= 1) {
    throw Error(Errc::BAD_CONFIG, "dip_frac must be in (0, 1)");
  }
}

WindowConfig load_window_config(const std::string& path) {
  ConfigFile file = load_config(path);
  WindowConfig cfg;
  for (const auto& [key, value] : file.preamble().entries) {
    if (key == "morning_start") {
      cfg.morning.start_minute = int(parse_config_int(value, key));
    } else if (key == "morning_end") {
      cfg.morning.end_minute = int(parse_config_int(value, key));
    } else if (key == "evening_start") {
      cfg.evening.start_minute = int(parse_config_int(value, key));
    } else if (key == "evening_end") {
      cfg.evening.end_minute = int(parse_config_int(value, key));
    } else if (key == "midday_start") {
      cfg.midday.start_minute = int(parse_config_int(value, key));
    } else if (key == "midday_end") {
      cfg.midday.end_minute = int(parse_config_int(value, key));
    } else if (key == "peak_height_frac") {
      cfg.peak_height_frac = parse_config_double(value, key);
    } else if (key == "dip_frac") {
      cfg.dip_frac = parse_config_double(value, key);
    } else {
      throw Error(Errc::BAD_CONFIG, path + ": unknown key", key);
    }
  }
  cfg.validate();
  return cfg;
}

bool bin_in_window(int bin_index, const MinuteWindow& window,
                   BinConfig config) {
  int start = bin_index * config.bin_width_minutes;
  int end = start + config.bin_width_minutes;
  return start < window.end_minute && end > window.start_minute;
}

std::vector<Peak> find_peaks(const UsageTemplate& t, const WindowConfig& cfg) {
  cfg.validate();
  t.config.bins();
  if (t.bins() < 3) {
    throw Error(Errc::INSUFFICIENT_INPUT,
                "peak detection needs at least 3 bins, got " +
                    std::to_string(t.bins()));
  }
  double max_value = *std::max_element(t.mean_counts.begin(),
                                       t.mean_counts.end());
  if (max_value <= 0.0) {
    throw Error(Errc::ZERO_TOTAL, "cannot detect peaks in an all-zero template");
  }
  std::vector<Peak> peaks = raw_maxima(t.mean_counts);
  double threshold = cfg.peak_height_frac * max_value;
  std::erase_if(peaks, [&](const Peak& p) { return p.value < threshold; });
  fill_prominence(peaks, t.mean_counts);
  return peaks;
}

std::set<MorphologyLabel> label_template(const UsageTemplate& t,
                                         const WindowConfig& cfg) {
  std::vector<Peak> peaks = find_peaks(t, cfg);
  std::set<MorphologyLabel> labels;
  if (peaks.empty()) {
    labels.insert(MorphologyLabel::FLAT);
    return labels;
  }
  bool has_morning = false, has_evening = false, has_midday = false;
  double morning_value =
      max_value_in_window(peaks, cfg.morning, t.config, &has_morning);
  double evening_value =
      max_value_in_window(peaks, cfg.evening, t.config, &has_evening);
  max_value_in_window(peaks, cfg.midday, t.config, &has_midday);

  if (has_morning) labels.insert(MorphologyLabel::MORNING_PEAK);
  if (has_evening) labels.insert(MorphologyLabel::EVENING_PEAK);
  if (has_morning && has_evening) labels.insert(MorphologyLabel::DUAL_PEAK);
  if ((has_morning || has_midday) && !has_evening) {
    labels.insert(MorphologyLabel::NO_EVENING_PEAK);
  }

  // A dip needs activity on both sides of the midday window; a lone peak
  // trailing off into the evening is not a dip.
  bool before = false, after = false;
  int width = t.config.bin_width_minutes;
  for (const Peak& p : peaks) {
    int start = p.bin_index * width;
    if (start + width <= cfg.midday.start_minute) before = true;
    if (start >= cfg.midday.end_minute) after = true;
  }
  if (before && after) {
    double reference = has_morning && has_evening
                           ? (morning_value + evening_value) / 2.0
                           : std::max_element(peaks.begin(), peaks.end(),
                                              [](const Peak& a, const Peak& b) {
                                                return a.value < b.value;
                                              })
                                 ->value;
    double midday_min = 0.0;
    bool seen = false;
    for (int bin = 0; bin < t.bins(); ++bin) {
      if (!bin_in_window(bin, cfg.midday, t.config)) continue;
      double v = t.mean_counts[std::size_t(bin)];
      midday_min = seen ? std::min(midday_min, v) : v;
      seen = true;
    }
    if (seen && midday_min <= cfg.dip_frac * reference) {
      labels.insert(MorphologyLabel::MIDDAY_DIP);
    }
  }
  return labels;
}

const ClassifiedGroup* StationClassification::find(Direction direction,
                                                   DayClass day_class) const {
  for (const auto& g : groups) {
    if (g.direction == direction && g.day_class == day_class) return &g;
  }
  return nullptr;
}

StationClassification classify_station(
    const std::optional<UsageTemplate>& entry_workday,
    const std::optional<UsageTemplate>& exit_workday,
    const std::optional<UsageTemplate>& entry_weekend,
    const std::optional<UsageTemplate>& exit_weekend,
    const WindowConfig& cfg) {
  cfg.validate();
  if (!entry_workday || !exit_workday) {
    throw Error(Errc::INSUFFICIENT_INPUT,
                "classification requires workday entry and exit templates");
  }
  const StationId& station = entry_workday->station;
  struct Slot {
    const std::optional<UsageTemplate>* tpl;
    Direction direction;
    DayClass day_class;
  };
  const Slot slots[] = {
      {&entry_workday, Direction::ENTRY, DayClass::WORKDAY},
      {&exit_workday, Direction::EXIT, DayClass::WORKDAY},
      {&entry_weekend, Direction::ENTRY, DayClass::WEEKEND},
      {&exit_weekend, Direction::EXIT, DayClass::WEEKEND},
  };

  StationClassification out;
  out.station = station;
  for (const Slot& slot : slots) {
    if (!slot.tpl->has_value()) continue;
    const UsageTemplate& t = **slot.tpl;
    if (t.station != station) {
      throw Error(Errc::STATION_MISMATCH,
                  "templates for one classification must share a station",
                  t.station.id);
    }
    if (t.direction != slot.direction || t.day_class != slot.day_class) {
      throw Error(Errc::INCOMPATIBLE_CONFIG,
                  "template passed in the wrong direction/day-class slot");
    }
    ClassifiedGroup g;
    g.direction = slot.direction;
    g.day_class = slot.day_class;
    g.peaks = find_peaks(t, cfg);
    g.labels = label_template(t, cfg);
    out.groups.push_back(std::move(g));
  }

  const ClassifiedGroup* entry = out.find(Direction::ENTRY, DayClass::WORKDAY);
  const ClassifiedGroup* exit = out.find(Direction::EXIT, DayClass::WORKDAY);
  bool entry_morning = entry->labels.count(MorphologyLabel::MORNING_PEAK) > 0;
  bool entry_dual = entry->labels.count(MorphologyLabel::DUAL_PEAK) > 0;
  bool exit_evening = exit->labels.count(MorphologyLabel::EVENING_PEAK) > 0;

  if (entry_morning && !entry_dual && exit_evening) {
    out.archetype = Archetype::COMMUTER_ORIGIN;
  } else if (entry_dual) {
    out.archetype = Archetype::EMPLOYMENT_HUB;
  } else {
    // Balance test on unthresholded maxima: a station whose entries rise in
    // both commute windows without either clearing the height threshold.
    std::vector<Peak> raw = raw_maxima(entry_workday->mean_counts);
    bool has_m = false, has_e = false;
    double m = max_value_in_window(raw, cfg.morning, entry_workday->config,
                                   &has_m);
    double e = max_value_in_window(raw, cfg.evening, entry_workday->config,
                                   &has_e);
    double lo = std::min(m, e), hi = std::max(m, e);
    if (has_m && has_e && lo > 0 && hi / lo <= 1.5) {
      out.archetype = Archetype::MIXED;
    } else {
      out.archetype = Archetype::UNCLASSIFIED;
    }
  }
  return out;
}

void write_classification_csv(std::ostream& out,
                              std::span<const StationClassification> items) {
  out << "station,archetype,direction,day_class,labels\n";
  for (const auto& item : items) {
    for (const auto& g : item.groups) {
      out << item.station.id << ',' << to_token(item.archetype) << ','
          << to_token(g.direction) << ',' << to_token(g.day_class) << ',';
      bool first = true;
      for (MorphologyLabel l : g.labels) {
        if (!first) out << ';';
        out << to_token(l);
        first = false;
      }
      out << '\n';
    }
  }
}

std::string format_classification_text(const StationClassification& item) {
  std::ostringstream out;
  out << "station " << item.station.id << ": " << to_token(item.archetype)
      << '\n';
  for (const auto& g : item.groups) {
    out << "  " << to_token(g.direction) << ' ' << to_token(g.day_class)
        << ": ";
    bool first = true;
    for (MorphologyLabel l : g.labels) {
      if (!first) out << ", ";
      out << to_token(l);
      first = false;
    }
    if (g.labels.empty()) out << "(none)";
    out << '\n';
    for (const Peak& p : g.peaks) {
      out << "    peak bin " << p.bin_index << " value "
          << format_double_exact(p.value) << " prominence "
          << format_double_exact(p.prominence) << '\n';
    }
  }
  return out.str();
}

}  // namespace railtap
