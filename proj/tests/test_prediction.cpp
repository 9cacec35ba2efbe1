#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "urbanlens/error.hpp"
#include "urbanlens/prediction.hpp"
#include "urbanlens/random.hpp"

using namespace urbanlens;
using fixtures::at;

namespace {

Dataset random_dataset(std::size_t n, std::size_t dims, std::uint64_t seed,
                       double (*concept_fn)(std::span<const double>)) {
  Rng rng(seed);
  Dataset d;
  d.dims = dims;
  std::vector<double> row(dims);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : row) v = std::round(rng.uniform() * 20.0) / 20.0;  // ties on purpose
    d.add(row, concept_fn(row) > 0.0 ? 1 : 0);
  }
  return d;
}

double accuracy(const GbtModel& m, const Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += m.classify(d.row(i)) == d.labels[i];
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("one threshold concept is learned") {
  Rng rng(3);
  Dataset d;
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform();
    const double noise = rng.uniform();
    d.add(std::vector<double>{noise, x}, x > 0.5 ? 1 : 0);
  }
  const auto m = train(d, {});
  CHECK(accuracy(m, d) >= 0.98);
  CHECK(m.trees.size() == 200);
  CHECK(m.trees[0].nodes[0].feature == 1);
}

TEST_CASE("the root split is the best exact split") {
  // Oracle: enumerate every feature and every gap between sorted distinct values.
  const auto d = random_dataset(300, 4, 8, [](std::span<const double> x) {
    return x[2] - 0.3 + 0.2 * (x[0] - 0.5);
  });
  GbtParams p;
  p.rounds = 1;
  p.max_depth = 1;
  const auto m = train(d, p);
  const double prior = std::count(d.labels.begin(), d.labels.end(), 1) / 300.0;
  const double p0 = prior;
  double G = 0.0, H = 0.0;
  for (auto y : d.labels) {
    G += p0 - y;
    H += p0 * (1 - p0);
  }
  const auto sc = [](double g, double h) { return g * g / (h + 1.0); };
  double best = 0.0;
  int best_f = -1;
  double best_thr = 0.0;
  for (std::size_t f = 0; f < d.dims; ++f) {
    std::set<double> values;
    for (std::size_t i = 0; i < d.size(); ++i) values.insert(d.row(i)[f]);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double thr = (*it + *std::next(it)) / 2.0;
      double gl = 0.0, hl = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.row(i)[f] < thr) {
          gl += p0 - d.labels[i];
          hl += p0 * (1 - p0);
        }
      }
      const double gain = 0.5 * (sc(gl, hl) + sc(G - gl, H - hl) - sc(G, H));
      if (gain > best + 1e-12) {
        best = gain;
        best_f = static_cast<int>(f);
        best_thr = thr;
      }
    }
  }
  const auto& root = m.trees[0].nodes[0];
  CHECK(root.feature == best_f);
  CHECK(root.threshold == doctest::Approx(best_thr).epsilon(1e-12));

  double gl = 0.0, hl = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.row(i)[static_cast<std::size_t>(best_f)] < best_thr) {
      gl += p0 - d.labels[i];
      hl += p0 * (1 - p0);
    }
  }
  const auto& left = m.trees[0].nodes[static_cast<std::size_t>(root.left)];
  const auto& right = m.trees[0].nodes[static_cast<std::size_t>(root.right)];
  CHECK(left.value == doctest::Approx(-gl / (hl + 1.0) * 0.1).epsilon(1e-12));
  CHECK(right.value == doctest::Approx(-(G - gl) / (H - hl + 1.0) * 0.1).epsilon(1e-12));
  CHECK(m.base_margin == doctest::Approx(std::log(prior / (1 - prior))));
}

TEST_CASE("an interaction needs depth") {
  const auto d = random_dataset(800, 3, 12, [](std::span<const double> x) {
    return (x[0] > 0.5) != (x[1] > 0.5) ? 1.0 : -1.0;
  });
  GbtParams stump;
  stump.max_depth = 1;
  stump.rounds = 50;
  GbtParams deep;
  deep.rounds = 50;
  CHECK(accuracy(train(d, deep), d) > 0.97);
  CHECK(accuracy(train(d, stump), d) < 0.8);
}

TEST_CASE("training is deterministic and rejects bad input") {
  const auto d = random_dataset(200, 3, 1, [](std::span<const double> x) { return x[0] - 0.4; });
  CHECK(train(d, {}) == train(d, {}));
  GbtParams sub;
  sub.subsample = 0.5;
  CHECK(train(d, sub) == train(d, sub));
  CHECK_THROWS_AS(train(Dataset{}, {}), Error);
  GbtParams bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train(d, bad), Error);
}

TEST_CASE("single-class training predicts that class") {
  Dataset d;
  for (int i = 0; i < 20; ++i) d.add(std::vector<double>{double(i)}, 1);
  const auto m = train(d, {});
  CHECK(m.classify(std::vector<double>{3.0}) == 1);
}

TEST_CASE("model file round trip") {
  const auto d = random_dataset(300, 5, 2, [](std::span<const double> x) { return x[1] - x[3]; });
  GbtParams p;
  p.rounds = 30;
  const auto m = train(d, p);
  const auto back = model_from_json(model_to_json(m));
  CHECK(back == m);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(back.margin(d.row(i)) == m.margin(d.row(i)));

  fixtures::TempDir dir("model");
  save_model(m, dir / "m.json");
  CHECK(load_model(dir / "m.json") == m);

  auto text = model_to_json(m);
  text.replace(text.find("\"version\":1"), 11, "\"version\":9");
  try {
    model_from_json(text);
    FAIL("expected a version error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::version_mismatch);
  }
  CHECK_THROWS_AS(model_from_json("{}"), Error);
  CHECK_THROWS_AS(model_from_json("not json"), Error);
}

TEST_CASE("g-mean") {
  std::vector<std::uint8_t> pred, label;
  const auto push = [&](int n, int p, int l) {
    for (int i = 0; i < n; ++i) {
      pred.push_back(static_cast<std::uint8_t>(p));
      label.push_back(static_cast<std::uint8_t>(l));
    }
  };
  push(8, 1, 1);
  push(2, 0, 1);
  push(7, 0, 0);
  push(3, 1, 0);
  const auto c = confusion(pred, label);
  CHECK(c.tp == 8);
  CHECK(c.fn == 2);
  CHECK(c.tn == 7);
  CHECK(c.fp == 3);
  CHECK(g_mean(pred, label) == doctest::Approx(std::sqrt(0.56)));
  CHECK(g_mean(pred, label) == doctest::Approx(0.7483).epsilon(1e-4));

  const std::vector<std::uint8_t> zeros(5, 0);
  CHECK(g_mean(zeros, zeros) == 0.0);  // sensitivity is 0/0
  const std::vector<std::uint8_t> ones(5, 1);
  CHECK(g_mean(ones, ones) == 0.0);
  CHECK(g_mean(label, label) == 1.0);
  CHECK_THROWS_AS(g_mean(zeros, label), Error);
}

TEST_CASE("undersampling") {
  std::vector<std::uint8_t> labels(1000, 0);
  for (int i = 0; i < 37; ++i) labels[static_cast<std::size_t>(i * 27)] = 1;
  const auto idx = undersample_indices(labels, 5);
  CHECK(idx.size() == 74);
  std::set<std::size_t> unique(idx.begin(), idx.end());
  CHECK(unique.size() == 74);
  std::size_t pos = 0;
  for (auto i : idx) pos += labels[i];
  CHECK(pos == 37);
  CHECK(undersample_indices(labels, 5) == idx);
  CHECK(undersample_indices(labels, 6) != idx);
  CHECK_FALSE(std::is_sorted(idx.begin(), idx.end()));
  CHECK_THROWS_AS(undersample_indices(std::vector<std::uint8_t>(10, 0), 1), Error);
}

TEST_CASE("stratified split") {
  std::vector<std::uint8_t> labels(1000, 0);
  for (int i = 0; i < 55; ++i) labels[static_cast<std::size_t>(i * 18)] = 1;
  const auto s = stratified_split(labels, 0.2, 42);
  std::size_t test_pos = 0;
  for (auto i : s.test) test_pos += labels[i];
  CHECK(test_pos == 11);
  CHECK(s.test.size() == 11 + 189);
  CHECK(s.train.size() + s.test.size() == 1000);
  std::vector<std::size_t> all(s.train);
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
  CHECK_THROWS_AS(stratified_split(labels, 1.0, 1), Error);
}

TEST_CASE("trip dataset concatenates origin and destination") {
  std::vector<NodeFeatures> f(3);
  for (std::size_t n = 0; n < 3; ++n) f[n].values.fill(static_cast<double>(n));
  const std::vector<TripRecord> trips{{0, 2, {}, 0, 1, TripLabel::occurrence},
                                      {1, 1, {}, 0, 1, TripLabel::regular}};
  const auto d = trip_dataset(f, trips);
  CHECK(d.dims == 52);
  CHECK(d.row(0)[0] == 0.0);
  CHECK(d.row(0)[26] == 2.0);
  CHECK(d.row(1)[51] == 1.0);
  CHECK(d.labels == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("grid tallies match brute force") {
  std::vector<Polyline> lines;
  for (int j = 0; j <= 10; ++j) lines.push_back({at(0, j * 120.0), at(1200, j * 120.0)});
  for (int i = 0; i <= 10; ++i) lines.push_back({at(i * 120.0, 0), at(i * 120.0, 1200)});
  GraphBuildOptions o;
  o.origin = fixtures::kOrigin;
  const auto g = build_graph(lines, o);
  Rng rng(4);
  std::vector<TripRecord> trips;
  std::vector<std::uint8_t> pred;
  for (int i = 0; i < 500; ++i) {
    TripRecord t;
    t.origin = static_cast<NodeId>(rng.below(g.node_count()));
    t.destination = static_cast<NodeId>(rng.below(g.node_count()));
    t.label = rng.below(5) == 0 ? TripLabel::occurrence : TripLabel::regular;
    trips.push_back(t);
    pred.push_back(static_cast<std::uint8_t>(rng.below(2)));
  }
  const auto grid = prediction_grid(g, trips, pred, 500.0);
  CHECK(grid.nx == 3);
  CHECK(grid.ny == 3);
  CHECK(grid.total() == 2 * trips.size());

  std::vector<std::uint32_t> success(9, 0), failure(9, 0);
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const bool ok = pred[i] == (trips[i].label == TripLabel::occurrence);
    for (NodeId n : {trips[i].origin, trips[i].destination}) {
      const auto p = g.planar()[n];
      const auto ix = std::min<std::size_t>(2, static_cast<std::size_t>((p.x - grid.min_x) / 500.0));
      const auto iy = std::min<std::size_t>(2, static_cast<std::size_t>((p.y - grid.min_y) / 500.0));
      ++(ok ? success : failure)[iy * 3 + ix];
    }
  }
  CHECK(grid.success == success);
  CHECK(grid.failure == failure);
  CHECK_THROWS_AS(prediction_grid(g, trips, std::vector<std::uint8_t>(3), 500.0), Error);
  CHECK_THROWS_AS(empty_grid(g, 0.0), Error);
}
