#include <benchmark/benchmark.h>

#include "urbanlens/random.hpp"
#include "urbanlens/spatial_index.hpp"

using namespace urbanlens;

namespace {

const GeoPoint kOrigin{-23.55, -46.63};

QuadTree uniform_tree(std::size_t n) {
  Rng rng(17);
  std::vector<IndexedPoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    points.push_back({unproject({rng.uniform() * 10000, rng.uniform() * 10000}, kOrigin),
                      static_cast<ItemId>(i)});
  }
  return build_index(points, kOrigin);
}

void BM_Build(benchmark::State& state) {
  Rng rng(17);
  std::vector<IndexedPoint> points;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    points.push_back({unproject({rng.uniform() * 10000, rng.uniform() * 10000}, kOrigin),
                      static_cast<ItemId>(i)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_index(points, kOrigin));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Build)->Arg(10000)->Arg(100000);

void BM_Knn(benchmark::State& state) {
  const auto tree = uniform_tree(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<std::size_t>(state.range(1));
  Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.knn({rng.uniform() * 10000, rng.uniform() * 10000}, k));
  }
}
BENCHMARK(BM_Knn)->ArgsProduct({{10000, 100000}, {1, 10, 100}});

void BM_Lens(benchmark::State& state) {
  const auto tree = uniform_tree(100000);
  Rng rng(4);
  for (auto _ : state) {
    const auto cursor = unproject({rng.uniform() * 10000, rng.uniform() * 10000}, kOrigin);
    benchmark::DoNotOptimize(lens(tree, cursor, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_Lens)->Arg(100)->Arg(1000);

void BM_Within(benchmark::State& state) {
  const auto tree = uniform_tree(100000);
  Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree.within({rng.uniform() * 10000, rng.uniform() * 10000}, 200.0));
  }
}
BENCHMARK(BM_Within);

}  // namespace
