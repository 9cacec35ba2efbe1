#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "urbanlens/crime_sim.hpp"
#include "urbanlens/error.hpp"
#include "urbanlens/random.hpp"

using namespace urbanlens;
using fixtures::at;
using fixtures::rect;

namespace {

NodeActivitySeries series_of(std::array<std::uint8_t, 12> active, std::uint32_t total) {
  return {0, active, total};
}

// Oracle: power-iterate the smoothed 2x2 chain instead of the closed form.
double power_iteration(const std::array<std::uint8_t, 12>& s) {
  double n[2][2] = {{0, 0}, {0, 0}};
  for (int t = 1; t < 12; ++t) n[s[t - 1]][s[t]] += 1;
  const double p01 = (n[0][1] + 1) / (n[0][0] + n[0][1] + 2);
  const double p11 = (n[1][1] + 1) / (n[1][0] + n[1][1] + 2);
  double active = 0.5;
  for (int i = 0; i < 20000; ++i) active = (1 - active) * p01 + active * p11;
  return active;
}

StreetGraph grid_graph(int n, double spacing) {
  std::vector<Polyline> lines;
  for (int j = 0; j < n; ++j) {
    Polyline row, col;
    for (int i = 0; i < n; ++i) {
      row.push_back(at(i * spacing, j * spacing));
      col.push_back(at(j * spacing, i * spacing));
    }
    lines.push_back(row);
    lines.push_back(col);
  }
  GraphBuildOptions o;
  o.origin = fixtures::kOrigin;
  return build_graph(lines, o);
}

}  // namespace

TEST_CASE("stationary probability of always and never active") {
  std::array<std::uint8_t, 12> always{};
  always.fill(1);
  const auto hot = detect_hotspots(std::vector{series_of(always, 40)});
  CHECK(hot[0].stay_active == doctest::Approx(12.0 / 13.0));
  CHECK(hot[0].become_active == doctest::Approx(0.5));
  CHECK(hot[0].stationary_active == doctest::Approx(13.0 / 15.0));
  CHECK(hot[0].is_hotspot);

  const auto cold = detect_hotspots(std::vector{series_of({}, 0)});
  CHECK(cold[0].stationary_active == doctest::Approx(2.0 / 15.0));
  CHECK_FALSE(cold[0].is_hotspot);
}

TEST_CASE("the minimum count gates hotspots") {
  std::array<std::uint8_t, 12> always{};
  always.fill(1);
  // 12 active months cannot come from fewer than 12 crimes; the gate is on totals.
  CHECK(detect_hotspots(std::vector{series_of(always, 12)}, {0.5, 13})[0].is_hotspot == false);
  CHECK(detect_hotspots(std::vector{series_of(always, 13)}, {0.5, 13})[0].is_hotspot);
}

TEST_CASE("closed form matches power iteration") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::array<std::uint8_t, 12> s{};
    for (auto& v : s) v = static_cast<std::uint8_t>(rng.below(2));
    const auto r = detect_hotspots(std::vector{series_of(s, 20)});
    CHECK(r[0].stationary_active == doctest::Approx(power_iteration(s)).epsilon(1e-9));
    CHECK(r[0].stationary_active >= 0.0);
    CHECK(r[0].stationary_active <= 1.0);
  }
}

TEST_CASE("degenerate chain") {
  CHECK(stationary_active(1.0, 0.0) == 1.0);
  CHECK(stationary_active(0.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("crimes are assigned to their nearest corner by month") {
  const auto g = grid_graph(3, 100);
  std::vector<CrimeEvent> crimes;
  Timestamp t;
  t.year = 2020;
  t.month = 2;
  crimes.push_back({at(10, 5), t, CrimeType::phone_theft});
  crimes.push_back({at(-20, 0), t, CrimeType::phone_theft});
  t.month = 11;
  crimes.push_back({at(190, 210), t, CrimeType::vehicle_theft});
  const auto s = activity_series(g, crimes);
  CHECK(s.size() == g.node_count());
  const auto a = nearest_corner(g, at(0, 0));
  const auto b = nearest_corner(g, at(200, 200));
  CHECK(s[a].total == 2);
  CHECK(s[a].active[1] == 1);
  CHECK(s[b].active[10] == 1);
  std::uint32_t total = 0;
  for (const auto& x : s) {
    total += x.total;
    std::uint32_t months = 0;
    for (auto m : x.active) months += m;
    CHECK(x.total >= months);
  }
  CHECK(total == 3);
}

TEST_CASE("synthetic trips") {
  const auto g = grid_graph(21, 100);  // 2 km square
  std::vector<CensusTract> tracts;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      CensusTract t;
      t.parts.push_back(rect(i * 500.0, j * 500.0, i * 500.0 + 440.0, j * 500.0 + 440.0));
      t.population = 1000.0 * (1 + i + j);
      tracts.push_back(t);
    }
  }
  const std::vector<NodeId> hot{nearest_corner(g, at(0, 0))};
  TripSynthConfig cfg;
  cfg.count = 30000;
  cfg.seed = 4;
  cfg.occurrence_share = 0.05;
  const auto out = synth_trips(g, tracts, hot, cfg);
  REQUIRE(out.trips.size() == 30000);

  SUBCASE("tract endpoints are the corners nearest the centroids") {
    CHECK(out.tract_nodes[0] == nearest_corner(g, at(200, 200)));
    CHECK(out.tract_nodes[5] == nearest_corner(g, at(700, 700)));
  }
  SUBCASE("occurrences only near hotspots") {
    std::size_t occ = 0;
    for (const auto& t : out.trips) {
      if (t.label != TripLabel::occurrence) continue;
      ++occ;
      const double d = std::min(distance(g.planar()[t.origin], g.planar()[hot[0]]),
                                distance(g.planar()[t.destination], g.planar()[hot[0]]));
      CHECK(d <= 500.0);
    }
    CHECK(static_cast<double>(occ) / 30000.0 == doctest::Approx(0.05).epsilon(0.15));
  }
  SUBCASE("expected near share is the two-draw complement") {
    // Only tract 0 (endpoint 283 m away) is within 500 m; equal areas make density shares population shares.
    double total = 0.0;
    for (const auto& t : tracts) total += t.population;
    const double p0 = tracts[0].population / total;
    CHECK(out.near_hotspot_share == doctest::Approx(1 - (1 - p0) * (1 - p0)));
    CHECK(out.occurrence_probability == doctest::Approx(std::min(1.0, 0.05 / out.near_hotspot_share)));
  }
  SUBCASE("period and weekday weights") {
    std::array<double, 4> periods{};
    std::array<double, 7> days{};
    std::array<double, 12> months{};
    for (const auto& t : out.trips) {
      periods[static_cast<std::size_t>(t.period)] += 1.0 / 30000;
      days[static_cast<std::size_t>(t.weekday)] += 1.0 / 30000;
      months[static_cast<std::size_t>(t.month - 1)] += 1.0 / 30000;
    }
    CHECK(periods[0] == doctest::Approx(0.30).epsilon(0.05));
    CHECK(periods[1] == doctest::Approx(0.35).epsilon(0.05));
    CHECK(periods[3] == doctest::Approx(0.10).epsilon(0.08));
    CHECK(days[2] == doctest::Approx(0.155).epsilon(0.08));
    CHECK(days[6] == doctest::Approx(0.1125).epsilon(0.08));
    for (double m : months) CHECK(m == doctest::Approx(1.0 / 12).epsilon(0.1));
  }
  SUBCASE("seeded and reproducible") {
    CHECK(synth_trips(g, tracts, hot, cfg).trips == out.trips);
    auto other = cfg;
    other.seed = 5;
    CHECK(synth_trips(g, tracts, hot, other).trips != out.trips);
  }
  SUBCASE("no hotspots means no occurrences") {
    const auto none = synth_trips(g, tracts, {}, cfg);
    CHECK(none.no_hotspots);
    for (const auto& t : none.trips) CHECK(t.label == TripLabel::regular);
  }
}

TEST_CASE("trip synthesis needs tracts") {
  const auto g = grid_graph(2, 100);
  CHECK_THROWS_AS(synth_trips(g, {}, {}, {}), Error);
}
