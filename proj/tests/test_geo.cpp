#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "urbanlens/error.hpp"
#include "urbanlens/geo.hpp"
#include "urbanlens/random.hpp"
#include "urbanlens/timestamp.hpp"

using namespace urbanlens;
using fixtures::at;
using fixtures::rect;

TEST_CASE("one degree of longitude at the equator") {
  const auto p = project({0.0, 1.0}, {0.0, 0.0});
  CHECK(p.x == doctest::Approx(111194.93).epsilon(1e-7));
  CHECK(p.y == 0.0);
}

TEST_CASE("longitude shrinks with the cosine of the origin latitude") {
  const GeoPoint origin{-23.55, -46.63};
  const auto p = project({-23.55, -46.62}, origin);
  const double expected = kEarthRadiusM * 0.01 * std::cos(-23.55 * std::numbers::pi / 180.0) *
                          std::numbers::pi / 180.0;
  CHECK(p.x == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("project and unproject are inverse") {
  Rng rng(5);
  const GeoPoint origin{-23.5, -46.6};
  for (int i = 0; i < 200; ++i) {
    const GeoPoint g{origin.lat + rng.uniform() - 0.5, origin.lon + rng.uniform() - 0.5};
    const auto back = unproject(project(g, origin), origin);
    CHECK(back.lat == doctest::Approx(g.lat).epsilon(1e-12));
    CHECK(back.lon == doctest::Approx(g.lon).epsilon(1e-12));
  }
}

TEST_CASE("point validity") {
  CHECK(GeoPoint{0, 0}.valid());
  CHECK_FALSE(GeoPoint{91, 0}.valid());
  CHECK_FALSE(GeoPoint{0, -181}.valid());
  CHECK_FALSE(GeoPoint{std::nan(""), 0}.valid());
}

TEST_CASE("segment distance") {
  CHECK(segment_distance({0, 5}, {-10, 0}, {10, 0}) == doctest::Approx(5));
  CHECK(segment_distance({13, 4}, {-10, 0}, {10, 0}) == doctest::Approx(5));
  CHECK(segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5));
}

TEST_CASE("box distance is zero inside") {
  const Box b{0, 0, 10, 10};
  CHECK(b.squared_distance_to({5, 5}) == 0.0);
  CHECK(b.squared_distance_to({13, 14}) == doctest::Approx(25.0));
}

TEST_CASE("polygon with a hole uses the even-odd rule") {
  const Projection proj(fixtures::kOrigin);
  Polygon donut = rect(0, 0, 100, 100);
  donut.rings.push_back(rect(40, 40, 60, 60).rings[0]);
  const PlanarPolygon poly(donut, proj);
  CHECK(poly.contains({10, 10}));
  CHECK_FALSE(poly.contains({50, 50}));
  CHECK_FALSE(poly.contains({150, 50}));
  CHECK(poly.distance({10, 10}) == 0.0);
  CHECK(poly.distance({50, 50}) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(poly.distance({130, 50}) == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(poly.area() == doctest::Approx(100.0 * 100.0 - 20.0 * 20.0).epsilon(1e-6));
}

TEST_CASE("area-weighted centroid of a multipolygon") {
  const Projection proj(fixtures::kOrigin);
  // 100x100 at the origin and 100x200 to its right.
  const std::vector<Polygon> parts{rect(0, 0, 100, 100), rect(200, 0, 300, 200)};
  const PlanarShape shape(parts, proj);
  const auto c = shape.centroid();
  // (1e4 * (50,50) + 2e4 * (250,100)) / 3e4
  CHECK(c.x == doctest::Approx(550.0 / 3.0).epsilon(1e-6));
  CHECK(c.y == doctest::Approx(250.0 / 3.0).epsilon(1e-6));
  CHECK(shape.distance({150, 50}) == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("geo box helpers") {
  const std::vector<GeoPoint> pts{{1, 2}, {-1, 5}, {0, 3}};
  const auto box = GeoBox::around(pts);
  CHECK(box.min_lat == -1);
  CHECK(box.max_lat == 1);
  CHECK(box.min_lon == 2);
  CHECK(box.max_lon == 5);
  CHECK(box.contains({1, 5}));
  CHECK(box.intersects(GeoBox{5, 1, 6, 2}));
  CHECK_FALSE(box.intersects(GeoBox{5.1, 1, 6, 2}));
}

TEST_CASE("timestamp parsing") {
  const auto t = *parse_timestamp("2020-03-14 17:05:09");
  CHECK(t.year == 2020);
  CHECK(t.month == 3);
  CHECK(t.day == 14);
  CHECK(t.hour == 17);
  CHECK(t.minute == 5);
  CHECK(t.second == 9);
  CHECK(t.weekday() == 5);  // a Saturday
  CHECK(parse_timestamp("2020-03-14T17:05Z") == parse_timestamp("2020-03-14 17:05"));
  CHECK(parse_timestamp("2020-07")->month == 7);
  CHECK(*parse_timestamp(t.to_string()) == t);
  CHECK_FALSE(parse_timestamp("2020-13-01"));
  CHECK_FALSE(parse_timestamp("2021-02-29"));
  CHECK_FALSE(parse_timestamp("yesterday"));
}

TEST_CASE("rng is reproducible and bounded") {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.below(7);
    CHECK(v < 7);
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("weighted sampler follows its weights") {
  const std::vector<double> w{1, 0, 3};
  const WeightedSampler s(w);
  Rng rng(3);
  std::array<int, 3> hits{};
  for (int i = 0; i < 40000; ++i) ++hits[s(rng)];
  CHECK(hits[1] == 0);
  CHECK(hits[0] / 40000.0 == doctest::Approx(0.25).epsilon(0.05));
  const auto p = s.probabilities();
  CHECK(p[2] == doctest::Approx(0.75));
}
