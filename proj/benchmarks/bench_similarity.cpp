// Distance kernels and the pairwise matrix they feed.
#include <benchmark/benchmark.h>

#include <vector>

#include "railtap/binning.hpp"
#include "railtap/similarity.hpp"
#include "railtap/synth.hpp"
#include "railtap/templates.hpp"

namespace {

using namespace railtap;

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform01() * 100.0;
  return v;
}

void BM_Distance(benchmark::State& state) {
  auto kind = static_cast<DistanceKind>(state.range(0));
  auto bins = std::size_t(state.range(1));
  Rng rng(7);
  auto a = random_vector(rng, bins);
  auto b = random_vector(rng, bins);
  for (auto _ : state) {
    double d = distance(a, b, kind);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations());
  state.SetLabel(std::string(to_token(kind)) + "/" + std::to_string(bins));
}
BENCHMARK(BM_Distance)
    ->ArgsProduct({{int(DistanceKind::L1), int(DistanceKind::L2),
                    int(DistanceKind::COSINE), int(DistanceKind::PEARSON)},
                   {24, 96}});

void BM_PairwiseMatrix(benchmark::State& state) {
  auto days = int(state.range(0));
  Rng rng(11);
  std::vector<DayProfile> profiles;
  for (int d = 0; d < days; ++d) {
    DayProfile p;
    p.station.id = "BENCH";
    p.date = Date{std::chrono::year{2018}, std::chrono::month{3},
                  std::chrono::day{unsigned(1 + d % 28)}};
    p.direction = d % 2 == 0 ? Direction::ENTRY : Direction::EXIT;
    p.bin_width_minutes = 60;
    p.counts.resize(24);
    for (auto& c : p.counts) c = rng.below(500);
    profiles.push_back(std::move(p));
  }
  for (auto _ : state) {
    SimilarityMatrix m = pairwise_matrix(profiles, DistanceKind::L2, true);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * days * (days - 1) / 2);
}
BENCHMARK(BM_PairwiseMatrix)->Arg(21)->Arg(30)->Arg(60);

}  // namespace
