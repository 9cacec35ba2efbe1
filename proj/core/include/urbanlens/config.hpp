#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "urbanlens/crime_sim.hpp"
#include "urbanlens/features.hpp"
#include "urbanlens/geo.hpp"
#include "urbanlens/prediction.hpp"
#include "urbanlens/spatial_index.hpp"

namespace urbanlens {

/// Input files. Relative paths resolve against the config file's directory.
struct InputPaths {
  std::filesystem::path streets;    // GeoJSON LineStrings
  std::filesystem::path crimes;     // CSV: lat,lon,datetime,crime_type
  std::filesystem::path transport;  // CSV: lat,lon,category
  std::filesystem::path favelas;    // GeoJSON polygons
  std::filesystem::path tracts;     // GeoJSON polygons with census properties
  std::filesystem::path stations;   // CSV: station_id,name,lat,lon
  std::filesystem::path weather;    // CSV: station_id,date,tmax_c,tmin_c,precip_mm
  std::optional<std::filesystem::path> trips;  // optional trips CSV instead of synthesis
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "*";
};

struct Config {
  std::filesystem::path workspace = "workspace.ulw";
  std::filesystem::path export_dir = "export";
  InputPaths inputs;
  std::optional<GeoPoint> projection_origin;
  double snap_tolerance_m = 0.5;
  double max_bad_row_fraction = 0.01;
  IndexConfig index;
  AggregationParams aggregation;
  HotspotParams hotspots;
  TripSynthConfig trips;
  GbtParams gbt;
  double holdout_fraction = 0.2;
  std::uint64_t split_seed = 42;
  std::uint64_t undersample_seed = 43;
  double grid_cell_m = 500.0;
  std::size_t shapley_samples = 1000;
  std::size_t shapley_permutations = 20;
  std::uint64_t shapley_seed = 44;
  ServerConfig server;
};

/// Reads a JSON config; absent keys keep their defaults. Unknown keys are
/// rejected so typos do not silently fall back to defaults.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text, const std::filesystem::path& base_dir);
/// Model and pipeline parameters only; file locations are left out so the
/// snapshot stored in a workspace does not depend on where it was built.
std::string config_to_json(const Config& config);

}  // namespace urbanlens
