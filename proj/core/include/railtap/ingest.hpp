#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "railtap/error.hpp"
#include "railtap/record.hpp"

namespace railtap {

/// STRICT aborts on the first malformed row; LENIENT counts and skips it.
/// A missing file, a wrong header, or a file whose name contradicts the
/// declared station/month abort in both modes.
enum class ParseMode { STRICT, LENIENT };

/// Open token vocabularies for the free-form record fields. An unset field
/// accepts any token; a set one rejects tokens outside it.
struct Vocabulary {
  std::optional<std::set<std::string>> ticket_types;
  std::optional<std::set<std::string>> benefit_types;
};

struct IngestStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rows_accepted = 0;
  std::uint64_t rows_rejected = 0;
  std::map<Errc, std::uint64_t> rejected_by_reason;

  std::uint64_t rejected(Errc reason) const;
  /// Flat `key = value` text report, one line per counter.
  std::string to_report() const;
};

inline constexpr std::string_view kIngestHeader =
    "timestamp,direction,fare_class,benefit_type,ticket_type,media,"
    "origin_station,dest_station";

/// Validates one raw CSV row (8 tokens in header order) against every record
/// invariant for the given station file. Throws Error carrying the violated
/// invariant's code and the offending token.
ValidationRecord validate_record(std::span<const std::string_view> raw_fields,
                                 const StationId& station, YearMonth year_month,
                                 const Vocabulary& vocab = {});

using RecordSink = std::function<void(const ValidationRecord&)>;

/// Streams a per-station-per-month CSV through `sink` in file order.
/// Memory use is bounded regardless of file size. Returns per-reason
/// ingest statistics satisfying rows_read == rows_accepted + rows_rejected.
IngestStats parse_file(const StationFile& file, ParseMode mode,
                       const RecordSink& sink, const Vocabulary& vocab = {});

/// Convenience wrapper collecting all records in memory.
std::vector<ValidationRecord> read_records(const StationFile& file, ParseMode mode,
                                           IngestStats* stats = nullptr,
                                           const Vocabulary& vocab = {});

/// One CSV line (no trailing newline) in the canonical column order.
std::string serialize_record(const ValidationRecord& record);

/// Header plus one line per record; reproduces a parsed file byte-for-byte
/// when the file contained only well-formed rows.
void write_records_csv(std::ostream& out, std::span<const ValidationRecord> records);

}  // namespace railtap
