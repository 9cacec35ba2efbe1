#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "urbanlens/error.hpp"
#include "urbanlens/ingest.hpp"
#include "urbanlens/pipeline.hpp"
#include "urbanlens/sample_city.hpp"

using namespace urbanlens;

namespace {

std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

SampleCityOptions small_city() {
  SampleCityOptions o;
  o.grid_size = 15;
  o.tracts_per_side = 4;
  o.spurs = 8;
  o.background_crimes_per_month = 20;
  return o;
}

}  // namespace

TEST_CASE("sample city files ingest back") {
  fixtures::TempDir dir("sample");
  const auto city = make_sample_city(small_city());
  write_sample_city(city, dir.path(), 1500);
  auto config = load_config(dir / "config.json");
  CHECK(config.trips.count == 1500);
  const auto w = ingest(config);
  CHECK(w.streets.size() == city.streets.size());
  CHECK(w.crimes.size() == city.crimes.size());
  CHECK(w.facilities.size() == city.facilities.size());
  CHECK(w.favelas.size() == city.favelas.size());
  CHECK(w.tracts.size() == city.tracts.size());
  REQUIRE(w.stations.size() == 3);
  CHECK(w.stations[0].monthly.size() == 12);
  CHECK(w.warnings.empty());
  CHECK(w.crimes[5].time == city.crimes[5].time);
}

TEST_CASE("stages run in order") {
  fixtures::TempDir dir("stages");
  write_sample_city(make_sample_city(small_city()), dir.path(), 1500);
  auto config = load_config(dir / "config.json");
  config.gbt.rounds = 20;
  config.shapley_samples = 20;
  auto w = ingest(config);
  const auto stage_error = [&](auto fn) {
    try {
      fn(w, config);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;
  };
  CHECK(stage_error(train_model) == ErrorCode::prerequisite);
  CHECK(stage_error(synthesize_trips) == ErrorCode::prerequisite);
  build(w, config);
  CHECK(stage_error(analyze) == ErrorCode::prerequisite);
  synthesize_trips(w, config);
  CHECK(w.trips.size() == 1500);
  CHECK(w.features.size() == w.graph.node_count());
  train_model(w, config);
  analyze(w, config);
  CHECK(w.has(Stage::analyzed));

  // Re-running an earlier stage drops later outputs.
  build(w, config);
  CHECK(w.stage == static_cast<int>(Stage::built));
  CHECK_FALSE(w.model.has_value());
  CHECK(w.trips.empty());
  synthesize_trips(w, config);
  train_model(w, config);

  const auto n = export_csv(w, dir / "out");
  CHECK(n == 2);
  CHECK(line_count(dir / "out" / "grid.csv") == w.grid->cells() + 1);
  CHECK(line_count(dir / "out" / "trips.csv") == w.trips.size() + 1);

  // Trips written by export load back onto the same corners.
  config.inputs.trips = dir / "out" / "trips.csv";
  const auto trips = w.trips;
  synthesize_trips(w, config);
  CHECK(w.trips == trips);
}

TEST_CASE("ingest needs three weather stations") {
  fixtures::TempDir dir("stations");
  auto city = make_sample_city(small_city());
  city.stations.pop_back();
  write_sample_city(city, dir.path());
  try {
    ingest(load_config(dir / "config.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ingest);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}
