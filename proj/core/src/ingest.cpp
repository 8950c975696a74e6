#include "railtap/ingest.hpp"

#include <array>
#include <fstream>
#include <ostream>
#include <sstream>

#include "railtap/dates.hpp"

namespace railtap {
namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

/// Splits on commas into at most `slots.size()` views; returns the true
/// field count even when it exceeds the slot capacity.
std::size_t split_fields(std::string_view line,
                         std::span<std::string_view> slots) {
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view field = comma == std::string_view::npos
                                 ? line.substr(start)
                                 : line.substr(start, comma - start);
    if (count < slots.size()) slots[count] = field;
    ++count;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return count;
}

bool plain_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ',' || c == '\n' || c == '\r') return false;
  }
  return true;
}

void validate_into(ValidationRecord& rec,
                   std::span<const std::string_view> fields,
                   const StationId& station, YearMonth year_month,
                   const Vocabulary& vocab) {
  if (fields.size() != 8) {
    throw Error(Errc::BAD_FIELD_COUNT,
                "expected 8 fields, got " + std::to_string(fields.size()));
  }
  auto ts = parse_timestamp(fields[0]);
  if (!ts) {
    throw Error(Errc::BAD_TIMESTAMP, "unparseable timestamp",
                std::string(fields[0]));
  }
  if (year_month_of(ts->date) != year_month) {
    throw Error(Errc::OUT_OF_MONTH,
                "timestamp outside declared month " +
                    format_year_month(year_month),
                std::string(fields[0]));
  }
  auto dir = direction_from_token(fields[1]);
  if (!dir) {
    throw Error(Errc::BAD_DIRECTION, "unknown direction",
                std::string(fields[1]));
  }
  auto fare = fare_class_from_token(fields[2]);
  if (!fare) {
    throw Error(Errc::BAD_FARE_CLASS, "unknown fare class",
                std::string(fields[2]));
  }
  std::string_view benefit = fields[3];
  if (*fare == FareClass::DISCOUNT && benefit.empty()) {
    throw Error(Errc::BENEFIT_FARE_CONFLICT,
                "discount fare requires a benefit type");
  }
  if (*fare == FareClass::FULL && !benefit.empty()) {
    throw Error(Errc::BENEFIT_FARE_CONFLICT,
                "full fare must not carry a benefit type",
                std::string(benefit));
  }
  if (!benefit.empty()) {
    if (!plain_token(benefit)) {
      throw Error(Errc::UNKNOWN_BENEFIT_TYPE, "malformed benefit type",
                  std::string(benefit));
    }
    if (vocab.benefit_types &&
        !vocab.benefit_types->count(std::string(benefit))) {
      throw Error(Errc::UNKNOWN_BENEFIT_TYPE,
                  "benefit type outside vocabulary", std::string(benefit));
    }
  }
  std::string_view ticket = fields[4];
  if (!plain_token(ticket)) {
    throw Error(Errc::UNKNOWN_TICKET_TYPE, "malformed ticket type",
                std::string(ticket));
  }
  if (vocab.ticket_types && !vocab.ticket_types->count(std::string(ticket))) {
    throw Error(Errc::UNKNOWN_TICKET_TYPE, "ticket type outside vocabulary",
                std::string(ticket));
  }
  auto media = media_from_token(fields[5]);
  if (!media) {
    throw Error(Errc::BAD_MEDIA, "unknown media", std::string(fields[5]));
  }
  if (!StationId::valid_token(fields[6])) {
    throw Error(Errc::BAD_STATION_TOKEN, "malformed origin station",
                std::string(fields[6]));
  }
  if (!StationId::valid_token(fields[7])) {
    throw Error(Errc::BAD_STATION_TOKEN, "malformed destination station",
                std::string(fields[7]));
  }
  // ENTRY taps happen at the origin end, EXIT taps at the destination end;
  // that end must be the file's own station.
  std::string_view own =
      *dir == Direction::ENTRY ? fields[6] : fields[7];
  if (own != station.id) {
    throw Error(Errc::STATION_MISMATCH,
                std::string(to_token(*dir)) +
                    " record does not tap at file station " + station.id,
                std::string(own));
  }

  rec.timestamp = *ts;
  rec.direction = *dir;
  rec.fare_class = *fare;
  rec.benefit_type.assign(benefit);
  rec.ticket_type.assign(ticket);
  rec.media = *media;
  rec.origin_station.id.assign(fields[6]);
  rec.dest_station.id.assign(fields[7]);
}

}  // namespace

std::uint64_t IngestStats::rejected(Errc reason) const {
  auto it = rejected_by_reason.find(reason);
  return it == rejected_by_reason.end() ? 0 : it->second;
}

std::string IngestStats::to_report() const {
  std::ostringstream out;
  out << "rows_read = " << rows_read << '\n';
  out << "rows_accepted = " << rows_accepted << '\n';
  out << "rows_rejected = " << rows_rejected << '\n';
  for (const auto& [reason, count] : rejected_by_reason) {
    out << "rejected_" << errc_name(reason) << " = " << count << '\n';
  }
  return out.str();
}

ValidationRecord validate_record(std::span<const std::string_view> raw_fields,
                                 const StationId& station, YearMonth year_month,
                                 const Vocabulary& vocab) {
  ValidationRecord rec;
  validate_into(rec, raw_fields, station, year_month, vocab);
  return rec;
}

IngestStats parse_file(const StationFile& file, ParseMode mode,
                       const RecordSink& sink, const Vocabulary& vocab) {
  // The file name is the declaration of record; a StationFile whose fields
  // contradict its own path is rejected before any row is read.
  StationFile derived = StationFile::from_path(file.path);
  if (derived.station != file.station) {
    throw Error(Errc::STATION_MISMATCH,
                "declared station " + file.station.id +
                    " does not match file name " + file.path,
                file.station.id);
  }
  if (derived.year_month != file.year_month) {
    throw Error(Errc::OUT_OF_MONTH,
                "declared month " + format_year_month(file.year_month) +
                    " does not match file name " + file.path);
  }

  std::ifstream in(file.path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IO_ERROR, "cannot open " + file.path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::BAD_HEADER, "missing header in " + file.path);
  }
  strip_cr(line);
  if (line != kIngestHeader) {
    throw Error(Errc::BAD_HEADER, "unexpected header in " + file.path, line);
  }

  IngestStats stats;
  ValidationRecord rec;
  std::array<std::string_view, 9> slots;
  std::uint64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    ++stats.rows_read;
    strip_cr(line);
    std::size_t n = split_fields(line, slots);
    try {
      if (n != 8) {
        throw Error(Errc::BAD_FIELD_COUNT,
                    "expected 8 fields, got " + std::to_string(n));
      }
      validate_into(rec, std::span(slots.data(), 8), file.station,
                    file.year_month, vocab);
    } catch (const Error& e) {
      if (mode == ParseMode::STRICT) {
        throw Error(e.code(),
                    file.path + " row " + std::to_string(row) + ": " + e.what(),
                    e.token());
      }
      ++stats.rows_rejected;
      ++stats.rejected_by_reason[e.code()];
      continue;
    }
    ++stats.rows_accepted;
    sink(rec);
  }
  if (in.bad()) {
    throw Error(Errc::IO_ERROR, "read failure in " + file.path);
  }
  return stats;
}

std::vector<ValidationRecord> read_records(const StationFile& file,
                                           ParseMode mode, IngestStats* stats,
                                           const Vocabulary& vocab) {
  std::vector<ValidationRecord> records;
  IngestStats s = parse_file(
      file, mode, [&](const ValidationRecord& r) { records.push_back(r); },
      vocab);
  if (stats) *stats = s;
  return records;
}

std::string serialize_record(const ValidationRecord& record) {
  std::string line = format_timestamp(record.timestamp);
  line += ',';
  line += to_token(record.direction);
  line += ',';
  line += to_token(record.fare_class);
  line += ',';
  line += record.benefit_type;
  line += ',';
  line += record.ticket_type;
  line += ',';
  line += to_token(record.media);
  line += ',';
  line += record.origin_station.id;
  line += ',';
  line += record.dest_station.id;
  return line;
}

void write_records_csv(std::ostream& out,
                       std::span<const ValidationRecord> records) {
  out << kIngestHeader << '\n';
  for (const auto& rec : records) {
    out << serialize_record(rec) << '\n';
  }
}

}  // namespace railtap
