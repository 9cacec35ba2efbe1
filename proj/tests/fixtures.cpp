#include "fixtures.hpp"

#include <atomic>
#include <fstream>

#include <unistd.h>

#include "urbanlens/pipeline.hpp"
#include "urbanlens/sample_city.hpp"

namespace fixtures {

using namespace urbanlens;

GeoPoint at(double x, double y) { return unproject({x, y}, kOrigin); }

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{Ring{at(x0, y0), at(x1, y0), at(x1, y1), at(x0, y1)}}};
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("urbanlens_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void TempDir::write(const std::string& name, const std::string& text) const {
  std::ofstream(path_ / name, std::ios::binary) << text;
}

Config small_config() {
  Config c;
  c.trips.count = 4000;
  c.gbt.rounds = 40;
  c.shapley_samples = 50;
  c.shapley_permutations = 8;
  return c;
}

Workspace small_workspace(Stage last) {
  SampleCityOptions options;
  options.grid_size = 21;
  options.tracts_per_side = 5;
  options.spurs = 15;
  options.background_crimes_per_month = 30;
  const auto city = make_sample_city(options);
  Workspace w;
  w.streets = city.streets;
  w.crimes = city.crimes;
  w.facilities = city.facilities;
  w.favelas = city.favelas;
  w.tracts = city.tracts;
  w.stations = city.stations;
  w.stage = static_cast<int>(Stage::ingested);
  const auto config = small_config();
  if (last >= Stage::built) build(w, config);
  if (last >= Stage::trips) synthesize_trips(w, config);
  if (last >= Stage::trained) train_model(w, config);
  if (last >= Stage::analyzed) analyze(w, config);
  return w;
}

}  // namespace fixtures
