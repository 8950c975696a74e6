#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "railtap/dates.hpp"
#include "railtap/record.hpp"

namespace railtap {

/// Time-of-day bin layout. Bins are half-open [start, end) minute ranges, so
/// a timestamp on a boundary lands in the later bin. The width must divide
/// the 1440-minute day evenly.
struct BinConfig {
  int bin_width_minutes = 60;

  /// Bin count for one day; throws Error{BAD_CONFIG} on an invalid width.
  int bins() const;

  friend bool operator==(const BinConfig&, const BinConfig&) = default;
};

int bin_index(const Timestamp& ts, const BinConfig& config);

/// Validation counts for one (station, date, direction) across a day's bins.
struct DayProfile {
  StationId station;
  Date date{};
  Direction direction = Direction::ENTRY;
  int bin_width_minutes = 60;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  int bins() const { return static_cast<int>(counts.size()); }

  friend bool operator==(const DayProfile&, const DayProfile&) = default;
};

/// Streams records into per-(station, date, direction) profiles. Memory is
/// proportional to the number of distinct days seen, not to record count.
class ProfileAccumulator {
 public:
  explicit ProfileAccumulator(BinConfig config);

  void add(const ValidationRecord& record);
  /// All accumulated profiles, sorted by station, date, direction.
  std::vector<DayProfile> profiles() const;
  const BinConfig& config() const { return config_; }

 private:
  using Key = std::tuple<std::string, std::chrono::sys_days, Direction>;
  BinConfig config_;
  std::map<Key, std::vector<std::uint64_t>> cells_;
  std::vector<std::uint64_t>* last_counts_ = nullptr;
  Key last_key_{};
};

std::vector<DayProfile> bin_records(std::span<const ValidationRecord> records,
                                    BinConfig config);

/// Counts as shares of the day total (sums to 1). Throws Error{ZERO_TOTAL}
/// for an all-zero profile.
std::vector<double> normalize_profile(const DayProfile& profile);
std::vector<double> normalized_shares(std::span<const double> values);

/// Regroups counts into a coarser width; the new width must be a multiple of
/// the old one (Error{INCOMPATIBLE_CONFIG} otherwise).
DayProfile rebin(const DayProfile& profile, int new_width_minutes);

/// CSV layout: `station,date,direction,bin_width,c0..cN`; every row in one
/// file shares the same bin width. Writing then reading is lossless.
void write_profiles_csv(std::ostream& out, std::span<const DayProfile> profiles,
                        BinConfig config);
void write_profiles_csv(std::ostream& out, std::span<const DayProfile> profiles);
std::vector<DayProfile> read_profiles_csv(std::istream& in,
                                          std::string_view origin = "<stream>");

}  // namespace railtap
