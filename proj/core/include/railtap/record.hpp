#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "railtap/dates.hpp"

namespace railtap {

/// Station identifier: a non-empty token without commas, newlines, or path
/// separators, so it survives both the CSV format and use in file names.
struct StationId {
  std::string id;

  static bool valid_token(std::string_view s);

  friend bool operator==(const StationId&, const StationId&) = default;
  friend auto operator<=>(const StationId&, const StationId&) = default;
};

enum class Direction { ENTRY, EXIT };
enum class FareClass { FULL, DISCOUNT };
enum class Media { PAPER, SMARTCARD };

std::string_view to_token(Direction d);
std::string_view to_token(FareClass f);
std::string_view to_token(Media m);
std::optional<Direction> direction_from_token(std::string_view t);
std::optional<FareClass> fare_class_from_token(std::string_view t);
std::optional<Media> media_from_token(std::string_view t);

/// One validation tap (entry or exit) at a station. Record timestamps are
/// naive local time. There is deliberately no passenger or card identifier.
struct ValidationRecord {
  Timestamp timestamp;
  Direction direction = Direction::ENTRY;
  FareClass fare_class = FareClass::FULL;
  std::string benefit_type;  // non-empty iff fare_class == DISCOUNT
  std::string ticket_type;
  Media media = Media::SMARTCARD;
  StationId origin_station;
  StationId dest_station;

  friend bool operator==(const ValidationRecord&, const ValidationRecord&) = default;
};

/// The station where the tap physically happened: origin for ENTRY records,
/// destination for EXIT records. Equals the owning file's station.
const StationId& tap_station(const ValidationRecord& record);

/// Handle for one per-station-per-month CSV file.
struct StationFile {
  StationId station;
  YearMonth year_month{};
  std::string path;
  std::optional<std::uint64_t> declared_row_count;

  /// Derives station and month from the `<station>_<YYYY-MM>.csv` file name
  /// convention. Throws Error{BAD_FILE_NAME} when the name does not follow it.
  static StationFile from_path(const std::string& path);

  /// Conventional file name for a station-month: `<station>_<YYYY-MM>.csv`.
  static std::string file_name(const StationId& station, YearMonth ym);
};

}  // namespace railtap
