#include <benchmark/benchmark.h>

#include "urbanlens/crime_sim.hpp"
#include "urbanlens/pipeline.hpp"
#include "urbanlens/prediction.hpp"
#include "urbanlens/sample_city.hpp"

using namespace urbanlens;

namespace {

// Sample city taken through synthesis and training once for all benchmarks.
const Workspace& trained_city() {
  static const Workspace w = [] {
    const auto city = make_sample_city({});
    Workspace w;
    w.streets = city.streets;
    w.crimes = city.crimes;
    w.facilities = city.facilities;
    w.favelas = city.favelas;
    w.tracts = city.tracts;
    w.stations = city.stations;
    w.stage = static_cast<int>(Stage::ingested);
    Config config;
    config.trips.count = 20000;
    build(w, config);
    synthesize_trips(w, config);
    train_model(w, config);
    return w;
  }();
  return w;
}

void BM_SynthTrips(benchmark::State& state) {
  const auto& w = trained_city();
  const auto hotspots = w.hotspot_nodes();
  TripSynthConfig config;
  config.count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(synth_trips(w.graph, w.tracts, hotspots, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthTrips)->Arg(87000)->Unit(benchmark::kMillisecond);

void BM_GbtPredict(benchmark::State& state) {
  const auto& w = trained_city();
  const auto data = trip_dataset(w.features, w.trips);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.model->probability(data.row(i)));
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_GbtPredict);

void BM_GbtTrain(benchmark::State& state) {
  const auto& w = trained_city();
  const auto data = undersample(trip_dataset(w.features, w.trips), 1);
  GbtParams params;
  params.rounds = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train(data, params));
}
BENCHMARK(BM_GbtTrain)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
