// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "urbanlens/analytics.hpp"
#include "urbanlens/config.hpp"
#include "urbanlens/crime_sim.hpp"
#include "urbanlens/ingest.hpp"
#include "urbanlens/pipeline.hpp"
#include "urbanlens/prediction.hpp"
#include "urbanlens/random.hpp"
#include "urbanlens/sample_city.hpp"
#include "urbanlens/service.hpp"
#include "urbanlens/spatial_index.hpp"
#include "urbanlens/street_graph.hpp"
#include "urbanlens/temporal_lens.hpp"
#include "urbanlens/workspace.hpp"

using namespace urbanlens;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

const GeoPoint kOrigin{-23.55, -46.63};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GeoPoint geo(double x, double y) { return unproject({x, y}, kOrigin); }

Polygon square(double x0, double y0, double x1, double y1) {
  return {{{geo(x0, y0), geo(x1, y0), geo(x1, y1), geo(x0, y1)}}};
}

// Brute-force k nearest: sort everything by (squared distance, id).
LensResult brute_knn(std::span<const QuadTree::Item> items, const ProjectedPoint& q, std::size_t k) {
  std::vector<std::pair<double, ItemId>> all;
  all.reserve(items.size());
  for (const auto& it : items) all.emplace_back(squared_distance(it.point, q), it.id);
  std::sort(all.begin(), all.end());
  LensResult r;
  const auto n = std::min(k, all.size());
  for (std::size_t i = 0; i < n; ++i) r.members.push_back(all[i].second);
  r.radius = n == 0 ? 0.0 : std::sqrt(all[n - 1].first);
  return r;
}

double box_distance(const ProjectedPoint& p, double x0, double y0, double x1, double y1) {
  const double dx = std::max({0.0, x0 - p.x, p.x - x1});
  const double dy = std::max({0.0, y0 - p.y, p.y - y1});
  return std::hypot(dx, dy);
}

// Scratch directory removed on exit.
struct Scratch {
  fs::path path;
  Scratch() {
    path = fs::temp_directory_path() / ("urbanlens_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// The desk-scale pipeline on the default sample city, shared by several criteria.
struct CityRun {
  Config config;
  Workspace workspace;
  double seconds = 0.0;
};

CityRun run_city(const fs::path& dir) {
  write_sample_city(make_sample_city({}), dir, 20000);
  CityRun run;
  run.config = load_config(dir / "config.json");
  const auto t0 = Clock::now();
  run.workspace = ingest(run.config);
  build(run.workspace, run.config);
  synthesize_trips(run.workspace, run.config);
  train_model(run.workspace, run.config);
  analyze(run.workspace, run.config);
  run.seconds = seconds_since(t0);
  return run;
}

void knn_oracle(Outcome& o) {
  Rng rng(1001);
  double worst_ms = 0.0;
  for (std::size_t n : {1000, 10000}) {
    std::vector<IndexedPoint> points;
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back({geo(rng.uniform() * 5000.0, rng.uniform() * 5000.0), static_cast<ItemId>(i)});
    }
    const auto tree = build_index(points, kOrigin);
    for (std::size_t k : {1, 10, 100}) {
      for (int q = 0; q < 200; ++q) {
        const ProjectedPoint p{rng.uniform() * 6000.0 - 500.0, rng.uniform() * 6000.0 - 500.0};
        const auto expected = brute_knn(tree.items(), p, k);
        o.expect(knn(tree, p, k) == expected,
                 "knn n=" + std::to_string(n) + " k=" + std::to_string(k));
        o.expect(lens(tree, unproject(p, kOrigin), k).members == expected.members,
                 "lens n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
    if (n == 10000) {
      for (std::size_t k : {1, 10, 100}) {
        const int calls = 5000;
        std::size_t sink = 0;
        const auto t0 = Clock::now();
        for (int q = 0; q < calls; ++q) {
          sink += tree.knn({rng.uniform() * 5000.0, rng.uniform() * 5000.0}, k).members.size();
        }
        const double ms = seconds_since(t0) * 1000.0 / calls;
        o.expect(sink == calls * k, "result size");
        worst_ms = std::max(worst_ms, ms);
      }
    }
  }
  o.expect(worst_ms < 1.0, "query time");
  o.detail << "3600 queries match brute force; slowest mean query at 10k points " << worst_ms
           << " ms";
}

void lens_adaptivity(Outcome& o) {
  Rng rng(1002);
  std::vector<IndexedPoint> points;
  ItemId id = 0;
  for (int i = 0; i < 2000; ++i) points.push_back({geo(rng.normal(0, 50), rng.normal(0, 50)), id++});
  for (int i = 0; i < 2000; ++i) {
    points.push_back({geo(rng.uniform() * 10000 - 5000, rng.uniform() * 10000 - 5000), id++});
  }
  const auto tree = build_index(points, kOrigin);
  const double dense = lens(tree, geo(0, 0), 100).radius;
  const double sparse = lens(tree, geo(3500, 3500), 100).radius;
  o.expect(dense < sparse, "cluster radius below sparse radius");
  o.detail << "k=100 radius " << dense << " m in the cluster, " << sparse << " m in the field";
}

void temporal_trace(Outcome& o) {
  const std::vector<std::uint64_t> counts{5, 3, 2, 4};
  const auto h = histogram_from_counts(counts);
  const auto sum = [&](const TemporalWindow& w) {
    return std::accumulate(counts.begin() + static_cast<long>(w.lo),
                           counts.begin() + static_cast<long>(w.hi) + 1, std::uint64_t{0});
  };
  std::vector<TemporalWindow> frames{initial_window(h, 6)};
  for (int i = 0; i < 6; ++i) frames.push_back(step(h, frames.back()));
  const std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 1}, {0, 2}, {2, 3}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    o.expect(frames[i].lo == expected[i].first && frames[i].hi == expected[i].second,
             "frame " + std::to_string(i));
    o.expect(frames[i].direction == Direction::forward, "forward before the end");
  }
  o.expect(frames[3].direction == Direction::backward, "reversal after the last bin");
  for (const auto& f : frames) o.expect(sum(f) >= 6, "frame count");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    o.detail << (i ? " -> " : "") << "[" << frames[i].lo << "," << frames[i].hi << "]"
             << (frames[i].direction == Direction::forward ? "f" : "b");
  }
}

void aggregation_oracles(Outcome& o) {
  Rng rng(1004);
  const Projection projection(kOrigin);

  // nearest_corner: 15x15 sample grid with spurs, 1000 queries.
  SampleCityOptions city;
  city.grid_size = 15;
  city.spurs = 20;
  const auto streets = make_sample_city(city).streets;
  GraphBuildOptions gopts;
  gopts.origin = kOrigin;
  const auto g = build_graph(streets, gopts);
  o.expect(g.node_count() <= 1000, "graph fixture size");
  for (int q = 0; q < 1000; ++q) {
    const ProjectedPoint p{rng.uniform() * 2000 - 1000, rng.uniform() * 2000 - 1000};
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId n = 0; n < g.node_count(); ++n) {
      const double d = squared_distance(g.planar()[n], p);
      if (d < best_d) best_d = d, best = n;
    }
    o.expect(nearest_corner(g, p) == best, "nearest_corner");
  }

  // radius_count: 800 facilities, some exactly on the 200 m circle.
  std::vector<ProjectedPoint> fpoints;
  std::vector<TransportCategory> fcats;
  const std::vector<ProjectedPoint> nodes{{0, 0}, {150, -40}, {-300, 220}, {410, 410}};
  for (const auto& n : nodes) {
    fpoints.push_back({n.x + 200.0, n.y});
    fcats.push_back(TransportCategory::subway);
    fpoints.push_back({n.x, n.y - 200.0});
    fcats.push_back(TransportCategory::train);
  }
  while (fpoints.size() < 800) {
    fpoints.push_back({rng.uniform() * 1400 - 700, rng.uniform() * 1400 - 700});
    fcats.push_back(static_cast<TransportCategory>(rng.below(kTransportCategories)));
  }
  const FacilityIndex facilities(fpoints, fcats, kOrigin);
  std::vector<ProjectedPoint> queries(nodes);
  for (int i = 0; i < 200; ++i) queries.push_back({rng.uniform() * 1200 - 600, rng.uniform() * 1200 - 600});
  for (const auto& n : queries) {
    TransportCounts expected{};
    for (std::size_t i = 0; i < fpoints.size(); ++i) {
      if (distance(fpoints[i], n) <= 200.0) ++expected[static_cast<std::size_t>(fcats[i])];
    }
    o.expect(radius_count(facilities, n, 200.0) == expected, "radius_count");
  }

  // favela_flag: one 100 m square, distance by hand.
  const std::vector<Polygon> favela{square(0, 0, 100, 100)};
  const std::vector<PlanarShape> favelas{PlanarShape(favela, projection)};
  std::vector<ProjectedPoint> fq{{50, 50}, {599.9, 50}, {600.1, 50}, {50, -499.9}, {50, -500.1}};
  for (int i = 0; i < 500; ++i) fq.push_back({rng.uniform() * 1600 - 750, rng.uniform() * 1600 - 750});
  for (const auto& p : fq) {
    const double d = box_distance(p, 0, 0, 100, 100);
    if (std::abs(d - 500.0) < 1e-6) continue;
    o.expect(favela_flag(p, favelas, 500.0) == (d <= 500.0 ? 1 : 0), "favela_flag");
  }

  // census_assign: 10x10 tracts of 100 m; shared edges average.
  std::vector<PlanarTract> tracts;
  for (int ty = 0; ty < 10; ++ty) {
    for (int tx = 0; tx < 10; ++tx) {
      const std::vector<Polygon> parts{square(tx * 100.0, ty * 100.0, tx * 100.0 + 100, ty * 100.0 + 100)};
      CensusValues v{};
      for (std::size_t i = 0; i < kCensusIndicators; ++i) v[i] = (ty * 10 + tx) * 10.0 + static_cast<double>(i);
      tracts.push_back({PlanarShape(parts, projection), v});
    }
  }
  std::vector<ProjectedPoint> cq{{100, 100}, {100, 50}, {250, 300.5}, {-20, -20}, {1050, 500}};
  for (int i = 0; i < 800; ++i) cq.push_back({rng.uniform() * 1200 - 100, rng.uniform() * 1200 - 100});
  for (const auto& p : cq) {
    CensusValues sum{};
    std::size_t matches = 0, nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    bool on_threshold = false;
    for (std::size_t t = 0; t < tracts.size(); ++t) {
      const double x0 = static_cast<double>(t % 10) * 100.0, y0 = static_cast<double>(t / 10) * 100.0;
      const double d = box_distance(p, x0, y0, x0 + 100, y0 + 100);
      on_threshold = on_threshold || std::abs(d - 1.0) < 1e-6;
      if (d <= 1.0) {
        for (std::size_t i = 0; i < kCensusIndicators; ++i) sum[i] += tracts[t].indicators[i];
        ++matches;
      }
      if (d < nearest_d) nearest_d = d, nearest = t;
    }
    if (on_threshold) continue;
    CensusValues expected = tracts[nearest].indicators;
    if (matches > 0) {
      expected = sum;
      for (auto& v : expected) v /= static_cast<double>(matches);
    }
    const auto got = census_assign(p, tracts, 1.0);
    bool same = true;
    for (std::size_t i = 0; i < kCensusIndicators; ++i) same = same && std::abs(got[i] - expected[i]) <= 1e-9;
    o.expect(same, "census_assign");
  }

  // idw_weather: three stations, inverse-distance weights.
  std::vector<WeatherStation> ws(3);
  const std::vector<ProjectedPoint> sloc{{-800, 300}, {600, 700}, {100, -900}};
  for (int s = 0; s < 3; ++s) {
    ws[s].id = "S" + std::to_string(s);
    ws[s].location = projection.inverse(sloc[static_cast<std::size_t>(s)]);
    ws[s].monthly[202003] = {25.0 + s, 15.0 - s, 100.0 * (s + 1)};
  }
  std::vector<PlanarStation> stations;
  for (int s = 0; s < 3; ++s) stations.push_back({ws[s].id, sloc[static_cast<std::size_t>(s)], &ws[s]});
  std::vector<ProjectedPoint> iq(sloc);
  for (int i = 0; i < 500; ++i) iq.push_back({rng.uniform() * 2000 - 1000, rng.uniform() * 2000 - 1000});
  for (const auto& p : iq) {
    const auto got = idw_weather(p, stations, 202003);
    double w[3], wsum = 0.0;
    int exact_station = -1;
    for (int s = 0; s < 3; ++s) {
      const double d = std::hypot(p.x - sloc[s].x, p.y - sloc[s].y);
      if (d < 1.0) exact_station = s;
      w[s] = 1.0 / d;
      wsum += w[s];
    }
    Climate expected{};
    if (exact_station >= 0) {
      expected = ws[exact_station].monthly[202003];
    } else {
      for (int s = 0; s < 3; ++s) {
        const auto& c = ws[s].monthly[202003];
        expected.tmax_c += w[s] / wsum * c.tmax_c;
        expected.tmin_c += w[s] / wsum * c.tmin_c;
        expected.precip_mm += w[s] / wsum * c.precip_mm;
      }
    }
    o.expect(std::abs(got.tmax_c - expected.tmax_c) <= 1e-9 &&
                 std::abs(got.tmin_c - expected.tmin_c) <= 1e-9 &&
                 std::abs(got.precip_mm - expected.precip_mm) <= 1e-9,
             "idw_weather");
  }
  o.detail << g.node_count() << " corners, 800 facilities, 100 tracts, 3 stations";
}

void trip_synthesis(Outcome& o, const CityRun& run) {
  const auto& w = run.workspace;
  const auto hotspots = w.hotspot_nodes();
  TripSynthConfig config = run.config.trips;
  config.count = 87000;
  const auto t0 = Clock::now();
  const auto synth = synth_trips(w.graph, w.tracts, hotspots, config);
  const double secs = seconds_since(t0);
  std::size_t occurrences = 0, unsound = 0;
  const auto near = [&](NodeId n) {
    for (auto h : hotspots) {
      if (distance(w.graph.planar()[n], w.graph.planar()[h]) <= config.label_radius_m) return true;
    }
    return false;
  };
  for (const auto& t : synth.trips) {
    if (t.label != TripLabel::occurrence) continue;
    ++occurrences;
    if (!near(t.origin) && !near(t.destination)) ++unsound;
  }
  const double fraction = static_cast<double>(occurrences) / static_cast<double>(synth.trips.size());
  const double target = 1.0 / 91.0;
  o.expect(synth.trips.size() == 87000, "trip count");
  o.expect(secs < 60.0, "time");
  o.expect(std::abs(fraction - target) <= 0.3 * target, "occurrence fraction");
  o.expect(unsound == 0, "every occurrence has an endpoint near a hotspot");
  o.detail << "87000 trips in " << secs << " s; occurrence fraction " << fraction << " (1/91 = "
           << target << "); " << unsound << " unsound; " << hotspots.size() << " hotspots";
}

void pipeline_gmean(Outcome& o, const CityRun& run) {
  const auto& e = *run.workspace.evaluation;
  o.expect(e.g_mean >= 0.8, "held-out G-mean");
  o.expect(e.shuffled_g_mean < 0.6, "shuffled control");
  o.detail << run.workspace.graph.node_count() << " corners, " << run.workspace.trips.size()
           << " trips; G-mean " << e.g_mean << " (sensitivity " << e.confusion.sensitivity() << ", specificity "
           << e.confusion.specificity() << "); shuffled " << e.shuffled_g_mean << "; pipeline "
           << run.seconds << " s";
}

void grid_conservation(Outcome& o, const CityRun& run) {
  const auto& w = run.workspace;
  const auto& e = *w.evaluation;
  const auto& grid = *w.grid;
  o.expect(grid.total() == 2 * e.test_indices.size(), "total equals twice the evaluated trips");

  std::vector<std::uint32_t> success(grid.cells(), 0), failure(grid.cells(), 0);
  const auto cell = [&](NodeId n) {
    const auto& p = w.graph.planar()[n];
    const auto ix = std::min<long>(static_cast<long>(grid.nx) - 1,
                                   std::max(0L, static_cast<long>(std::floor((p.x - grid.min_x) / grid.cell_m))));
    const auto iy = std::min<long>(static_cast<long>(grid.ny) - 1,
                                   std::max(0L, static_cast<long>(std::floor((p.y - grid.min_y) / grid.cell_m))));
    return static_cast<std::size_t>(iy) * grid.nx + static_cast<std::size_t>(ix);
  };
  for (std::size_t i = 0; i < e.test_indices.size(); ++i) {
    const auto& t = w.trips[e.test_indices[i]];
    const bool hit = e.test_predictions[i] == (t.label == TripLabel::occurrence ? 1 : 0);
    auto& tally = hit ? success : failure;
    ++tally[cell(t.origin)];
    ++tally[cell(t.destination)];
  }
  o.expect(success == grid.success && failure == grid.failure, "per-cell tallies");
  o.detail << grid.nx << "x" << grid.ny << " cells, total " << grid.total() << " = 2 x "
           << e.test_indices.size();
}

void shapley_checks(Outcome& o) {
  Rng rng(1008);
  const ShapleyOptions exact{ShapleyMethod::exact, 0, 0};

  // Efficiency on a 10-feature boosted model.
  Dataset data;
  data.dims = 10;
  for (int i = 0; i < 400; ++i) {
    std::vector<double> x(10);
    for (auto& v : x) v = rng.uniform();
    data.add(x, (x[0] + x[1] * x[2] + 0.3 * rng.uniform()) > 0.8 ? 1 : 0);
  }
  GbtParams params;
  params.rounds = 30;
  const auto model = train(data, params);
  const ScoreFunction f = [&](std::span<const double> x) { return model.probability(x); };
  const auto bg = column_means(data.values, 10);
  double worst = 0.0;
  for (std::size_t r = 0; r < 20; ++r) {
    const auto phi = shapley(f, data.row(r), bg, exact);
    const double total = std::accumulate(phi.begin(), phi.end(), 0.0);
    worst = std::max(worst, std::abs(total - (f(data.row(r)) - f(bg))));
  }
  o.expect(worst < 1e-9, "exact efficiency");

  // Monte Carlo against exact on a hand-built 3-feature tree with
  // probability-scale leaves.
  RegressionTree tree;
  tree.nodes = {
      {0, 0.5, 1, 2, 0.0},  {1, 0.3, 3, 4, 0.0},  {2, 0.7, 5, 6, 0.0},
      {-1, 0, -1, -1, 0.1}, {-1, 0, -1, -1, 0.35}, {-1, 0, -1, -1, 0.6}, {-1, 0, -1, -1, 0.9},
  };
  const ScoreFunction tf = [&](std::span<const double> x) { return tree.predict(x); };
  double mc_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(3), b(3);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : b) v = rng.uniform();
    const auto e = shapley(tf, x, b, exact);
    const auto m = shapley(tf, x, b, {ShapleyMethod::monte_carlo, 2000, 100 + static_cast<std::uint64_t>(t)});
    for (std::size_t i = 0; i < 3; ++i) mc_err = std::max(mc_err, std::abs(e[i] - m[i]));
  }
  o.expect(mc_err <= 0.05, "Monte Carlo within 0.05");

  // Linear model: phi_i = w_i (x_i - b_i).
  std::vector<double> weights(8);
  for (auto& v : weights) v = rng.uniform() * 4 - 2;
  const ScoreFunction lf = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
    return s;
  };
  double lin_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(8), b(8);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : b) v = rng.uniform();
    const auto phi = shapley(lf, x, b, exact);
    for (std::size_t i = 0; i < 8; ++i) {
      lin_err = std::max(lin_err, std::abs(phi[i] - weights[i] * (x[i] - b[i])));
    }
  }
  o.expect(lin_err < 1e-12, "linear closed form");
  o.detail << "efficiency residual " << worst << "; MC(2000) max error " << mc_err
           << "; linear max error " << lin_err;
}

void correlation_checks(Outcome& o, const CityRun& run) {
  const auto& c = *run.workspace.correlation;
  const auto& m = c.full.matrix;
  bool bounded = true, symmetric = true, diagonal = true;
  for (std::size_t i = 0; i < m.n; ++i) {
    diagonal = diagonal && m(i, i) == 1.0;
    for (std::size_t j = 0; j < m.n; ++j) {
      bounded = bounded && m(i, j) >= -1.0 && m(i, j) <= 1.0;
      symmetric = symmetric && m(i, j) == m(j, i);
    }
  }
  o.expect(m.n == kTripFeatureCount, "full matrix size");
  o.expect(bounded, "entries in [-1, 1]");
  o.expect(symmetric, "symmetric");
  o.expect(diagonal, "unit diagonal");
  o.expect(c.reduced.matrix.n == 8, "reduced matrix is 8x8");

  SquareMatrix full(4);
  const double v[4][4] = {{1, 0.8, 0.2, -0.4}, {0.8, 1, 0.6, 0.0}, {0.2, 0.6, 1, -0.5}, {-0.4, 0.0, -0.5, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) full(i, j) = v[i][j];
  }
  const std::vector<std::size_t> groups{0, 0, 1, 1};
  const auto reduced = reduce_by_layer(full, groups, 2).matrix;
  const double cross = (0.2 - 0.4 + 0.6 + 0.0) / 4.0;
  o.expect(reduced.n == 2, "fixture size");
  o.expect(std::abs(reduced(0, 0) - 0.8) < 1e-12 && std::abs(reduced(1, 1) + 0.5) < 1e-12,
           "within-layer means");
  o.expect(std::abs(reduced(0, 1) - cross) < 1e-12 && std::abs(reduced(1, 0) - cross) < 1e-12,
           "cross-layer means");
  o.detail << m.n << "x" << m.n << " full, " << c.reduced.matrix.n << "x" << c.reduced.matrix.n
           << " reduced; fixture block means [0.8, " << cross << "; " << cross << ", -0.5]";
}

void round_trip(Outcome& o, const CityRun& run, const fs::path& dir) {
  const auto path = dir / "roundtrip" / "workspace.ulw";
  save_workspace(run.workspace, path);
  const auto original = std::make_shared<const Workspace>(run.workspace);
  const auto loaded = std::make_shared<const Workspace>(load_workspace(path));
  const Api a(original), b(loaded);

  std::vector<ApiRequest> requests{
      {"GET", "/api/health", {}, ""},
      {"GET", "/api/layers", {}, ""},
      {"GET", "/api/graph/nodes", {}, ""},
      {"GET", "/api/prediction/grid", {}, ""},
      {"GET", "/api/analytics/correlation", {}, ""},
      {"GET", "/api/analytics/shapley", {}, ""},
      {"POST", "/api/temporal/window", {}, R"({"layer":1,"granularity":"month","mode":"density","value":0.3,"current":null})"},
      {"POST", "/api/temporal/window", {}, R"({"layer":2,"granularity":"weekday","mode":"count","value":5000,"current":{"lo":0,"hi":2,"direction":"forward"}})"},
  };
  for (int layer = 1; layer <= 9; ++layer) {
    const auto id = std::to_string(layer);
    requests.push_back({"GET", "/api/layers/" + id + "/features", {}, ""});
    requests.push_back({"GET", "/api/layers/" + id + "/features", {{"bbox", "-46.64,-23.56,-46.62,-23.54"}}, ""});
  }
  // Every request up to here must succeed; lens and histogram requests on
  // layers without points or timestamps legitimately return errors.
  const std::size_t required = requests.size();
  for (int layer = 1; layer <= 9; ++layer) {
    const auto id = std::to_string(layer);
    requests.push_back({"GET", "/api/lens/spatial", {{"layer", id}, {"lon", "-46.625"}, {"lat", "-23.548"}, {"k", "50"}}, ""});
    for (const char* g : {"month", "weekday", "hour"}) {
      requests.push_back({"GET", "/api/temporal/" + id + "/histogram", {{"granularity", g}}, ""});
    }
  }
  std::size_t ok = 0, mismatched = 0, required_failed = 0;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto ra = a.handle(requests[i]), rb = b.handle(requests[i]);
    if (ra.status == 200) ++ok;
    if (i < required && ra.status != 200) ++required_failed;
    if (ra.status != rb.status || ra.body != rb.body) ++mismatched;
  }
  o.expect(serialize_workspace(*loaded) == serialize_workspace(*original), "serialized bytes");
  o.expect(mismatched == 0, "identical responses");
  o.expect(required_failed == 0, "core requests succeed");
  o.detail << requests.size() << " requests (" << ok << " with status 200), " << mismatched
           << " differ after save/load";
}

}  // namespace

int main() {
  Scratch scratch;
  int failures = 0;
  const auto report = [&](const char* name, const std::function<void(Outcome&)>& check) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s  %-22s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
  };

  report("knn-oracle", knn_oracle);
  report("lens-adaptivity", lens_adaptivity);
  report("temporal-trace", temporal_trace);
  report("aggregation-oracles", aggregation_oracles);

  CityRun run;
  std::string city_error;
  try {
    run = run_city(scratch.path / "city");
  } catch (const std::exception& e) {
    city_error = e.what();
  }
  const auto with_city = [&](auto fn) {
    return [&, fn](Outcome& o) {
      if (!city_error.empty()) throw std::runtime_error("sample city pipeline: " + city_error);
      fn(o, run);
    };
  };
  report("trip-synthesis", with_city(trip_synthesis));
  report("pipeline-gmean", with_city(pipeline_gmean));
  report("grid-conservation", with_city(grid_conservation));
  report("shapley", shapley_checks);
  report("correlation", with_city(correlation_checks));
  report("round-trip", with_city([&](Outcome& o, const CityRun& r) { round_trip(o, r, scratch.path); }));

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
