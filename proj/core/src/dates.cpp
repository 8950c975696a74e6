#include "railtap/dates.hpp"

#include <cstdio>

namespace railtap {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

std::chrono::weekday weekday_of(Date d) {
  return std::chrono::weekday{std::chrono::sys_days{d}};
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return {};
  auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return {};
  Date date{std::chrono::year{to_int(y)}, std::chrono::month{unsigned(to_int(m))},
            std::chrono::day{unsigned(to_int(d))}};
  if (!date.ok()) return {};
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()),
                unsigned(d.month()), unsigned(d.day()));
  return buf;
}

std::optional<YearMonth> parse_year_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return {};
  auto y = text.substr(0, 4), m = text.substr(5, 2);
  if (!all_digits(y) || !all_digits(m)) return {};
  YearMonth ym{std::chrono::year{to_int(y)}, std::chrono::month{unsigned(to_int(m))}};
  if (!ym.ok()) return {};
  return ym;
}

std::string format_year_month(YearMonth ym) {
  char buf[12];
  std::snprintf(buf, sizeof buf, "%04d-%02u", int(ym.year()), unsigned(ym.month()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM with optional :SS
  if (text.size() != 16 && text.size() != 19) return {};
  if (text[10] != 'T' || text[13] != ':') return {};
  auto date = parse_date(text.substr(0, 10));
  if (!date) return {};
  auto hh = text.substr(11, 2), mm = text.substr(14, 2);
  if (!all_digits(hh) || !all_digits(mm)) return {};
  Timestamp ts;
  ts.date = *date;
  ts.hour = to_int(hh);
  ts.minute = to_int(mm);
  if (text.size() == 19) {
    if (text[16] != ':') return {};
    auto ss = text.substr(17, 2);
    if (!all_digits(ss)) return {};
    ts.second = to_int(ss);
    ts.has_seconds = true;
  }
  if (ts.hour > 23 || ts.minute > 59 || ts.second > 59) return {};
  return ts;
}

std::string format_timestamp(const Timestamp& ts) {
  char buf[24];
  if (ts.has_seconds) {
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d",
                  format_date(ts.date).c_str(), ts.hour, ts.minute, ts.second);
  } else {
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d", format_date(ts.date).c_str(),
                  ts.hour, ts.minute);
  }
  return buf;
}

YearMonth year_month_of(Date d) { return YearMonth{d.year(), d.month()}; }

unsigned days_in_month(YearMonth ym) {
  auto last = std::chrono::year_month_day_last{ym.year(),
                                               std::chrono::month_day_last{ym.month()}};
  return unsigned(last.day());
}

Date date_at(YearMonth ym, unsigned day) {
  return Date{ym.year(), ym.month(), std::chrono::day{day}};
}

}  // namespace railtap
