// Row generation rate for one station month.
#include <benchmark/benchmark.h>

#include <sstream>

#include "railtap/synth.hpp"

namespace {

using namespace railtap;

void BM_GenerateMonth(benchmark::State& state) {
  StationScenario s = canonical_scenarios()[std::size_t(state.range(0))];
  YearMonth ym{std::chrono::year{2018}, std::chrono::month{6}};
  std::uint64_t rows = 0;
  for (auto _ : state) {
    std::ostringstream out;
    EmissionLog log = generate_month_stream(s, ym, out);
    rows = log.total_rows;
    benchmark::DoNotOptimize(log);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(rows));
  state.SetLabel(s.name);
}
BENCHMARK(BM_GenerateMonth)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
