#include "railtap/record.hpp"

#include <filesystem>

#include "railtap/error.hpp"

namespace railtap {

bool StationId::valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '/' || c == '\\' ||
        c == '\0') {
      return false;
    }
  }
  return true;
}

std::string_view to_token(Direction d) {
  return d == Direction::ENTRY ? "ENTRY" : "EXIT";
}
std::string_view to_token(FareClass f) {
  return f == FareClass::FULL ? "FULL" : "DISCOUNT";
}
std::string_view to_token(Media m) {
  return m == Media::PAPER ? "PAPER" : "SMARTCARD";
}

std::optional<Direction> direction_from_token(std::string_view t) {
  if (t == "ENTRY") return Direction::ENTRY;
  if (t == "EXIT") return Direction::EXIT;
  return {};
}
std::optional<FareClass> fare_class_from_token(std::string_view t) {
  if (t == "FULL") return FareClass::FULL;
  if (t == "DISCOUNT") return FareClass::DISCOUNT;
  return {};
}
std::optional<Media> media_from_token(std::string_view t) {
  if (t == "PAPER") return Media::PAPER;
  if (t == "SMARTCARD") return Media::SMARTCARD;
  return {};
}

const StationId& tap_station(const ValidationRecord& record) {
  return record.direction == Direction::ENTRY ? record.origin_station
                                              : record.dest_station;
}

StationFile StationFile::from_path(const std::string& path) {
  std::filesystem::path p(path);
  auto stem = p.stem().string();
  // <station>_<YYYY-MM>.csv: the month is the fixed-width tail, the station
  // may itself contain underscores.
  if (p.extension() != ".csv" || stem.size() < 9 ||
      stem[stem.size() - 8] != '_') {
    throw Error(Errc::BAD_FILE_NAME,
                "file name does not follow <station>_<YYYY-MM>.csv: " + path, stem);
  }
  auto ym = parse_year_month(stem.substr(stem.size() - 7));
  auto station = stem.substr(0, stem.size() - 8);
  if (!ym || !StationId::valid_token(station)) {
    throw Error(Errc::BAD_FILE_NAME,
                "file name does not follow <station>_<YYYY-MM>.csv: " + path, stem);
  }
  return StationFile{StationId{station}, *ym, path, std::nullopt};
}

std::string StationFile::file_name(const StationId& station, YearMonth ym) {
  return station.id + "_" + format_year_month(ym) + ".csv";
}

}  // namespace railtap
