#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "railtap/binning.hpp"
#include "railtap/templates.hpp"

namespace railtap {

/// Weighted categorical distribution over tokens. Weights are positive and
/// sum to 1 within 1e-9.
struct CategoricalMix {
  std::vector<std::pair<std::string, double>> weights;

  void validate(std::string_view what) const;
  bool has_token(std::string_view token) const;
  double weight_of(std::string_view token) const;
};

struct MetadataMix {
  CategoricalMix fare_class;    // over FULL / DISCOUNT
  CategoricalMix benefit_type;  // sampled for DISCOUNT fares; may be empty
                                // only when DISCOUNT has zero weight
  CategoricalMix ticket_type;
  CategoricalMix media;  // over PAPER / SMARTCARD
};

/// Everything needed to emit synthetic months for one station: expected
/// per-bin counts for each (day class, direction), metadata distributions,
/// counterpart endpoints, and the stream seed.
struct StationScenario {
  std::string name;
  StationId station;
  BinConfig config;
  std::vector<double> workday_entry;
  std::vector<double> workday_exit;
  std::vector<double> weekend_entry;
  std::vector<double> weekend_exit;
  MetadataMix metadata_mix;
  CategoricalMix counterpart_stations;
  std::uint64_t seed = 0;

  void validate() const;
};

/// What one generated month actually emitted: per-(date, direction) bin
/// counts plus token histograms over every sampled field. total_rows equals
/// the generated file's data row count exactly.
struct EmissionCell {
  Date date{};
  Direction direction = Direction::ENTRY;
  std::vector<std::uint64_t> bin_counts;

  std::uint64_t total() const;
};

struct EmissionLog {
  std::vector<EmissionCell> cells;  // date-ascending, ENTRY before EXIT
  std::uint64_t total_rows = 0;
  std::map<std::string, std::uint64_t> fare_hist;
  std::map<std::string, std::uint64_t> benefit_hist;
  std::map<std::string, std::uint64_t> ticket_hist;
  std::map<std::string, std::uint64_t> media_hist;
  std::map<std::string, std::uint64_t> counterpart_hist;

  const EmissionCell* find(Date date, Direction direction) const;
};

/// Deterministic random stream: a std::mt19937_64 seeded per month, with all
/// derived draws (uniform, modulo, Poisson via unit-exponential summation,
/// categorical by cumulative weight) implemented here so the byte stream
/// never depends on library-specific distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();  // [0, 1)
  std::uint64_t below(std::uint64_t n);
  std::uint64_t poisson(double lambda);
  /// Index into `cumulative` (non-empty, non-decreasing, last = total).
  std::size_t categorical(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
};

/// Per-month stream seed: scenario seed mixed with the calendar month so
/// months are independent and a month is reproducible in isolation.
std::uint64_t month_seed(std::uint64_t scenario_seed, YearMonth ym);

/// Emits one month of rows in the ingest CSV format (header included) to
/// `out`. Each day's class picks the expected vector via classify_day, each
/// bin count is Poisson(expected), each record is placed uniformly within
/// its bin at second precision, and rows are written in timestamp order.
/// Identical inputs produce byte-identical output.
EmissionLog generate_month_stream(const StationScenario& scenario,
                                  YearMonth ym, std::ostream& out,
                                  const CalendarPolicy& policy = {});

struct GeneratedMonth {
  std::string csv;
  EmissionLog log;
};
GeneratedMonth generate_month(const StationScenario& scenario, YearMonth ym,
                              const CalendarPolicy& policy = {});

/// Writes `<station>_<YYYY-MM>.csv` under `dir` and returns the log and the
/// full path.
struct GeneratedFile {
  std::string path;
  EmissionLog log;
};
GeneratedFile generate_month_file(const StationScenario& scenario,
                                  YearMonth ym, const std::string& dir,
                                  const CalendarPolicy& policy = {});

/// CSV: `date,direction,count`, one row per emission cell.
void write_emission_csv(std::ostream& out, const EmissionLog& log);

/// Scenario config: one `[name]` section per scenario with keys station,
/// bin_width, seed, the four expected vectors, and `TOKEN:WEIGHT` lists for
/// fare_class, benefit_type, ticket_type, media, counterparts.
std::vector<StationScenario> load_scenarios(const std::string& path);
std::vector<StationScenario> parse_scenarios(std::string_view text,
                                             std::string_view origin);
void write_scenarios(std::ostream& out,
                     std::span<const StationScenario> scenarios);

/// Built-in reference shapes: OUTSIDE_COMMUTER (sharp morning entry peak,
/// evening exit peak), INSIDE_HUB (dual entry peaks one hour later with a
/// midday dip), OUTSIDE_WEEKEND (weekend daytime plateau), INSIDE_WEEKEND
/// (weekend morning traffic, no evening peak).
std::vector<StationScenario> canonical_scenarios();

}  // namespace railtap
