#include <benchmark/benchmark.h>

#include "urbanlens/random.hpp"
#include "urbanlens/temporal_lens.hpp"

using namespace urbanlens;

namespace {

void BM_WindowSweep(benchmark::State& state) {
  Rng rng(8);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(state.range(0)));
  for (auto& c : counts) c = rng.below(1000);
  const auto h = histogram_from_counts(counts);
  const auto target = resolve_target(h, TargetMode::density, 0.2);
  auto w = initial_window(h, target);
  for (auto _ : state) {
    w = step(h, w);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_WindowSweep)->Arg(12)->Arg(24)->Arg(10000);

void BM_Histogram(benchmark::State& state) {
  Rng rng(9);
  std::vector<Timestamp> times;
  for (int i = 0; i < state.range(0); ++i) {
    Timestamp t;
    t.year = 2020;
    t.month = 1 + static_cast<int>(rng.below(12));
    t.day = 1 + static_cast<int>(rng.below(28));
    t.hour = static_cast<int>(rng.below(24));
    times.push_back(t);
  }
  for (auto _ : state) benchmark::DoNotOptimize(make_histogram(times, Granularity::hour));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Histogram)->Arg(100000);

}  // namespace
