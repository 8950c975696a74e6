#include "railtap/templates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "railtap/config.hpp"
#include "railtap/error.hpp"

namespace railtap {

std::string_view to_token(DayClass day_class) {
  switch (day_class) {
    case DayClass::WORKDAY: return "WORKDAY";
    case DayClass::WEEKEND: return "WEEKEND";
    case DayClass::MONDAY: return "MONDAY";
    case DayClass::TUESDAY: return "TUESDAY";
    case DayClass::WEDNESDAY: return "WEDNESDAY";
    case DayClass::THURSDAY: return "THURSDAY";
    case DayClass::FRIDAY: return "FRIDAY";
    case DayClass::SATURDAY: return "SATURDAY";
    case DayClass::SUNDAY: return "SUNDAY";
  }
  return "WORKDAY";
}

std::optional<DayClass> day_class_from_token(std::string_view token) {
  static constexpr DayClass all[] = {
      DayClass::WORKDAY,  DayClass::WEEKEND,  DayClass::MONDAY,
      DayClass::TUESDAY,  DayClass::WEDNESDAY, DayClass::THURSDAY,
      DayClass::FRIDAY,   DayClass::SATURDAY, DayClass::SUNDAY,
  };
  for (DayClass c : all) {
    if (to_token(c) == token) return c;
  }
  return {};
}

void CalendarPolicy::validate() const {
  if (min_support < 1) {
    throw Error(Errc::BAD_CONFIG, "min_support must be positive, got " +
                                      std::to_string(min_support));
  }
  if (!(tau > 0)) {
    throw Error(Errc::BAD_CONFIG, "tau must be positive");
  }
}

CalendarPolicy load_calendar_policy(const std::string& path) {
  ConfigFile file = load_config(path);
  CalendarPolicy policy;
  for (const auto& [key, value] : file.preamble().entries) {
    if (key == "min_support") {
      policy.min_support = int(parse_config_int(value, key));
    } else if (key == "tau") {
      policy.tau = parse_config_double(value, key);
    } else if (key == "holiday" || key == "holidays") {
      for (const std::string& tok : parse_token_list(value)) {
        auto date = parse_date(tok);
        if (!date) {
          throw Error(Errc::BAD_CONFIG, path + ": unparseable holiday date",
                      tok);
        }
        policy.holidays.insert(*date);
      }
    } else {
      throw Error(Errc::BAD_CONFIG, path + ": unknown key", key);
    }
  }
  policy.validate();
  return policy;
}

DayClass weekday_class(std::chrono::weekday wd) {
  switch (wd.c_encoding()) {
    case 0: return DayClass::SUNDAY;
    case 1: return DayClass::MONDAY;
    case 2: return DayClass::TUESDAY;
    case 3: return DayClass::WEDNESDAY;
    case 4: return DayClass::THURSDAY;
    case 5: return DayClass::FRIDAY;
    default: return DayClass::SATURDAY;
  }
}

DayClassification classify_day(Date date, const CalendarPolicy& policy) {
  DayClassification out;
  std::chrono::weekday wd = weekday_of(date);
  out.weekday = weekday_class(wd);
  bool weekend = wd == std::chrono::Saturday || wd == std::chrono::Sunday ||
                 policy.holidays.count(date) > 0;
  out.coarse = weekend ? DayClass::WEEKEND : DayClass::WORKDAY;
  return out;
}

bool in_day_class(Date date, DayClass cls, const CalendarPolicy& policy) {
  DayClassification c = classify_day(date, policy);
  if (cls == DayClass::WORKDAY || cls == DayClass::WEEKEND) {
    return c.coarse == cls;
  }
  return c.weekday == cls;
}

SimilarityMatrix pairwise_matrix(std::span<const DayProfile> profiles,
                                 DistanceKind kind, bool normalize) {
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> labels;
  vectors.reserve(profiles.size());
  labels.reserve(profiles.size());
  for (const auto& p : profiles) {
    if (p.bin_width_minutes != profiles.front().bin_width_minutes) {
      throw Error(Errc::INCOMPATIBLE_CONFIG,
                  "profiles in a distance matrix must share bin width");
    }
    if (normalize) {
      vectors.push_back(normalize_profile(p));
    } else {
      vectors.emplace_back(p.counts.begin(), p.counts.end());
    }
    labels.push_back(format_date(p.date) + "/" +
                     std::string(to_token(p.direction)));
  }
  return pairwise_matrix(vectors, labels, kind);
}

CoherenceResult check_coherence(std::span<const DayProfile> profiles,
                                DistanceKind kind,
                                const CalendarPolicy& policy) {
  policy.validate();
  if (profiles.size() < 2) {
    throw Error(Errc::INSUFFICIENT_SUPPORT,
                "coherence needs at least 2 profiles");
  }
  CoherenceResult out;
  std::vector<std::vector<double>> shares;
  shares.reserve(profiles.size());
  for (const auto& p : profiles) {
    if (p.bin_width_minutes != profiles.front().bin_width_minutes) {
      throw Error(Errc::INCOMPATIBLE_CONFIG,
                  "profiles in a coherence group must share bin width");
    }
    shares.push_back(normalize_profile(p));
  }
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    for (std::size_t j = i + 1; j < shares.size(); ++j) {
      sum += distance(shares[i], shares[j], kind);
      ++pairs;
    }
  }
  out.coherence = sum / double(pairs);
  out.coherent = out.coherence <= policy.tau &&
                 profiles.size() >= std::size_t(policy.min_support);
  return out;
}

UsageTemplate extract_template(std::span<const DayProfile> profiles,
                               DayClass day_class,
                               const CalendarPolicy& policy,
                               DistanceKind kind) {
  policy.validate();
  if (profiles.empty()) {
    throw Error(Errc::INSUFFICIENT_SUPPORT,
                "cannot extract a template from zero profiles");
  }
  const DayProfile& first = profiles.front();
  for (const auto& p : profiles) {
    if (p.station != first.station || p.direction != first.direction ||
        p.bin_width_minutes != first.bin_width_minutes ||
        p.bins() != first.bins()) {
      throw Error(Errc::INCOMPATIBLE_CONFIG,
                  "profiles in a template group must share station, "
                  "direction, and bin width");
    }
    if (!in_day_class(p.date, day_class, policy)) {
      throw Error(Errc::DAY_CLASS_MISMATCH,
                  "profile for " + format_date(p.date) + " is not " +
                      std::string(to_token(day_class)));
    }
  }

  UsageTemplate tpl;
  tpl.station = first.station;
  tpl.direction = first.direction;
  tpl.day_class = day_class;
  tpl.config = BinConfig{first.bin_width_minutes};
  tpl.support = int(profiles.size());

  std::size_t bins = first.counts.size();
  tpl.mean_counts.assign(bins, 0.0);
  tpl.std_counts.assign(bins, 0.0);
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < bins; ++i) {
      tpl.mean_counts[i] += double(p.counts[i]);
    }
  }
  double n = double(profiles.size());
  for (double& m : tpl.mean_counts) m /= n;
  if (profiles.size() > 1) {
    for (const auto& p : profiles) {
      for (std::size_t i = 0; i < bins; ++i) {
        double d = double(p.counts[i]) - tpl.mean_counts[i];
        tpl.std_counts[i] += d * d;
      }
    }
    for (double& s : tpl.std_counts) s = std::sqrt(s / (n - 1.0));
  }

  // A lone profile has no pairs to compare; it is trivially self-coherent.
  if (profiles.size() >= 2) {
    CoherenceResult coh = check_coherence(profiles, kind, policy);
    tpl.coherence = coh.coherence;
    tpl.coherent = coh.coherent;
  } else {
    tpl.coherence = 0.0;
    tpl.coherent = policy.min_support <= 1;
  }

  for (const auto& p : profiles) {
    YearMonth ym = year_month_of(p.date);
    if (!std::count(tpl.months.begin(), tpl.months.end(), ym)) {
      tpl.months.push_back(ym);
    }
  }
  std::sort(tpl.months.begin(), tpl.months.end());
  return tpl;
}

void write_template_csv(std::ostream& out, const UsageTemplate& tpl) {
  out << "# station = " << tpl.station.id << '\n';
  out << "# direction = " << to_token(tpl.direction) << '\n';
  out << "# day_class = " << to_token(tpl.day_class) << '\n';
  out << "# bin_width = " << tpl.config.bin_width_minutes << '\n';
  out << "# support = " << tpl.support << '\n';
  out << "# coherence = " << format_double_exact(tpl.coherence) << '\n';
  out << "# coherent = " << (tpl.coherent ? "true" : "false") << '\n';
  if (!tpl.months.empty()) {
    out << "# months = ";
    for (std::size_t i = 0; i < tpl.months.size(); ++i) {
      if (i) out << ',';
      out << format_year_month(tpl.months[i]);
    }
    out << '\n';
  }
  out << "bin,mean,std\n";
  for (std::size_t i = 0; i < tpl.mean_counts.size(); ++i) {
    out << i << ',' << format_double_exact(tpl.mean_counts[i]) << ','
        << format_double_exact(tpl.std_counts[i]) << '\n';
  }
}

UsageTemplate read_template_csv(std::istream& in, std::string_view origin) {
  UsageTemplate tpl;
  std::string line;
  bool saw_header = false;
  bool saw_station = false, saw_direction = false, saw_class = false,
       saw_width = false, saw_support = false, saw_coherence = false,
       saw_coherent = false;
  auto fail = [&](const std::string& msg, std::string token = "") {
    throw Error(Errc::BAD_CONFIG, std::string(origin) + ": " + msg,
                std::move(token));
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view v = trim(line);
    if (v.empty()) continue;
    if (v.front() != '#') {
      if (v != "bin,mean,std") fail("expected bin,mean,std header", line);
      saw_header = true;
      break;
    }
    v.remove_prefix(1);
    std::size_t eq = v.find('=');
    if (eq == std::string_view::npos) fail("malformed metadata line", line);
    std::string key{trim(v.substr(0, eq))};
    std::string value{trim(v.substr(eq + 1))};
    if (key == "station") {
      if (!StationId::valid_token(value)) fail("malformed station", value);
      tpl.station.id = value;
      saw_station = true;
    } else if (key == "direction") {
      auto dir = direction_from_token(value);
      if (!dir) fail("unknown direction", value);
      tpl.direction = *dir;
      saw_direction = true;
    } else if (key == "day_class") {
      auto cls = day_class_from_token(value);
      if (!cls) fail("unknown day class", value);
      tpl.day_class = *cls;
      saw_class = true;
    } else if (key == "bin_width") {
      tpl.config.bin_width_minutes = int(parse_config_int(value, key));
      tpl.config.bins();
      saw_width = true;
    } else if (key == "support") {
      long long s = parse_config_int(value, key);
      if (s < 1) fail("support must be positive", value);
      tpl.support = int(s);
      saw_support = true;
    } else if (key == "coherence") {
      tpl.coherence = parse_config_double(value, key);
      saw_coherence = true;
    } else if (key == "coherent") {
      tpl.coherent = parse_config_bool(value, key);
      saw_coherent = true;
    } else if (key == "months") {
      for (const std::string& tok : parse_token_list(value)) {
        auto ym = parse_year_month(tok);
        if (!ym) fail("unparseable month", tok);
        tpl.months.push_back(*ym);
      }
    } else {
      fail("unknown metadata key", key);
    }
  }
  if (!saw_header) fail("missing bin,mean,std header");
  if (!saw_station || !saw_direction || !saw_class || !saw_width ||
      !saw_support || !saw_coherence || !saw_coherent) {
    fail("incomplete template metadata");
  }

  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::string_view v = line;
    std::size_t c1 = v.find(',');
    std::size_t c2 = c1 == std::string_view::npos ? c1 : v.find(',', c1 + 1);
    if (c2 == std::string_view::npos ||
        v.find(',', c2 + 1) != std::string_view::npos) {
      fail("expected bin,mean,std row", line);
    }
    std::string bin{v.substr(0, c1)};
    if (bin != std::to_string(expected)) fail("bins out of order", bin);
    tpl.mean_counts.push_back(
        parse_config_double(trim(v.substr(c1 + 1, c2 - c1 - 1)), "mean"));
    tpl.std_counts.push_back(
        parse_config_double(trim(v.substr(c2 + 1)), "std"));
    ++expected;
  }
  if (int(tpl.mean_counts.size()) != tpl.config.bins()) {
    throw Error(Errc::INCOMPATIBLE_CONFIG,
                std::string(origin) + ": expected " +
                    std::to_string(tpl.config.bins()) + " bins, got " +
                    std::to_string(tpl.mean_counts.size()));
  }
  return tpl;
}

}  // namespace railtap
