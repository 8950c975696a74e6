#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace railtap {

using Date = std::chrono::year_month_day;
using YearMonth = std::chrono::year_month;

/// Naive local wall-clock timestamp at second precision. `has_seconds`
/// records whether the source text carried a seconds field so that
/// serialization can reproduce the input byte-for-byte.
struct Timestamp {
  Date date{};
  int hour = 0;
  int minute = 0;
  int second = 0;
  bool has_seconds = false;

  int minute_of_day() const { return hour * 60 + minute; }
  int second_of_day() const { return minute_of_day() * 60 + second; }

  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.date == b.date && a.hour == b.hour && a.minute == b.minute &&
           a.second == b.second;
  }
};

std::chrono::weekday weekday_of(Date d);

/// "YYYY-MM-DD"; empty optional when malformed or not a real calendar date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// "YYYY-MM"; empty optional when malformed.
std::optional<YearMonth> parse_year_month(std::string_view text);
std::string format_year_month(YearMonth ym);

/// ISO 8601 local time without zone: "YYYY-MM-DDTHH:MM" or
/// "YYYY-MM-DDTHH:MM:SS". Rejects impossible dates and out-of-range times.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(const Timestamp& ts);

YearMonth year_month_of(Date d);
unsigned days_in_month(YearMonth ym);
Date date_at(YearMonth ym, unsigned day);

}  // namespace railtap
