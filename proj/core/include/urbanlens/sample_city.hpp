#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "urbanlens/layers.hpp"
#include "urbanlens/street_graph.hpp"

namespace urbanlens {

/// Synthetic desk-scale city: a square street grid with dead-end spurs,
/// clustered property crime, census tracts, three weather stations, transit
/// facilities and a few informal settlements.
struct SampleCityOptions {
  int grid_size = 45;         // corners per side
  double spacing_m = 100.0;   // block length
  int tracts_per_side = 10;
  int spurs = 60;
  int year = 2020;
  std::size_t background_crimes_per_month = 120;
  std::size_t cluster_crimes_per_month = 30;
  GeoPoint center{-23.55, -46.63};
  std::uint64_t seed = 2020;
};

struct SampleCity {
  std::vector<Polyline> streets;
  std::vector<CrimeEvent> crimes;
  std::vector<Facility> facilities;
  std::vector<FavelaArea> favelas;
  std::vector<CensusTract> tracts;
  std::vector<WeatherStation> stations;
};

SampleCity make_sample_city(const SampleCityOptions& options = {});

/// Writes every input file plus a config.json that references them with
/// relative paths. `trip_count` sets trips.count in the config.
void write_sample_city(const SampleCity& city, const std::filesystem::path& dir,
                       std::size_t trip_count = 20000);

}  // namespace urbanlens
