// Parse and bin throughput over one generated station month.
#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

#include "railtap/binning.hpp"
#include "railtap/ingest.hpp"
#include "railtap/synth.hpp"

namespace {

using namespace railtap;

// One month of realistic rows, generated once and reused by every iteration.
const GeneratedFile& fixture_file() {
  static const GeneratedFile file = [] {
    StationScenario s = canonical_scenarios()[0];
    s.name = "BENCH";
    s.station.id = "BENCH";
    s.seed = 9001;
    auto dir = std::filesystem::temp_directory_path() / "railtap_bench";
    std::filesystem::create_directories(dir);
    return generate_month_file(s, YearMonth{std::chrono::year{2018},
                                            std::chrono::month{6}},
                               dir.string());
  }();
  return file;
}

void BM_ParseMonth(benchmark::State& state) {
  const GeneratedFile& file = fixture_file();
  StationFile handle = StationFile::from_path(file.path);
  std::uint64_t rows = 0;
  for (auto _ : state) {
    IngestStats stats =
        parse_file(handle, ParseMode::STRICT,
                   [](const ValidationRecord&) {});
    rows = stats.rows_accepted;
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(rows));
  state.SetBytesProcessed(std::int64_t(state.iterations()) *
                          std::int64_t(std::filesystem::file_size(file.path)));
}
BENCHMARK(BM_ParseMonth)->Unit(benchmark::kMillisecond);

void BM_ParseAndBinMonth(benchmark::State& state) {
  const GeneratedFile& file = fixture_file();
  StationFile handle = StationFile::from_path(file.path);
  std::uint64_t rows = 0;
  for (auto _ : state) {
    ProfileAccumulator acc(BinConfig{60});
    IngestStats stats =
        parse_file(handle, ParseMode::STRICT,
                   [&](const ValidationRecord& rec) { acc.add(rec); });
    auto profiles = acc.profiles();
    rows = stats.rows_accepted;
    benchmark::DoNotOptimize(profiles);
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(rows));
}
BENCHMARK(BM_ParseAndBinMonth)->Unit(benchmark::kMillisecond);

void BM_SerializeRecord(benchmark::State& state) {
  const GeneratedFile& file = fixture_file();
  StationFile handle = StationFile::from_path(file.path);
  std::vector<ValidationRecord> records =
      read_records(handle, ParseMode::STRICT);
  records.resize(10'000);
  for (auto _ : state) {
    for (const auto& rec : records) {
      std::string line = serialize_record(rec);
      benchmark::DoNotOptimize(line);
    }
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) *
                          std::int64_t(records.size()));
}
BENCHMARK(BM_SerializeRecord);

}  // namespace
