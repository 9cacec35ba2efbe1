#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "urbanlens/analytics.hpp"
#include "urbanlens/crime_sim.hpp"
#include "urbanlens/features.hpp"
#include "urbanlens/layers.hpp"
#include "urbanlens/prediction.hpp"
#include "urbanlens/street_graph.hpp"

namespace urbanlens {

inline constexpr std::uint32_t kWorkspaceVersion = 1;

enum class Stage : int { ingested = 1, built = 2, trips = 3, trained = 4, analyzed = 5 };
const char* to_string(Stage s);
/// CLI command that produces the stage.
const char* command_for(Stage s);

struct Evaluation {
  std::vector<std::size_t> test_indices;  // into Workspace::trips
  std::vector<std::uint8_t> test_predictions;
  Confusion confusion;
  double g_mean = 0.0;
  /// Same pipeline trained on label-shuffled data; a sanity floor.
  double shuffled_g_mean = 0.0;
  std::size_t train_size = 0;
  std::size_t balanced_train_size = 0;
  std::vector<double> background;  // training feature means, Shapley baseline
};

struct CorrelationReport {
  PearsonResult full;
  ReducedMatrix reduced;
  std::vector<std::size_t> assignment;  // feature -> thematic layer
  std::size_t rows = 0;
};

/// Everything the service needs, produced stage by stage by the CLI.
struct Workspace {
  int stage = 0;
  std::string config_json;
  Warnings warnings;

  // Raw layers.
  std::vector<Polyline> streets;
  std::vector<CrimeEvent> crimes;
  std::vector<Facility> facilities;
  std::vector<FavelaArea> favelas;
  std::vector<CensusTract> tracts;
  std::vector<WeatherStation> stations;

  // build
  StreetGraph graph;
  std::vector<NodeClass> classes;
  std::vector<HotspotResult> hotspots;

  // synth-trips
  std::vector<TripRecord> trips;
  double occurrence_probability = 0.0;
  double near_hotspot_share = 0.0;
  bool no_hotspots = false;
  std::vector<NodeFeatures> features;

  // train
  std::optional<GbtModel> model;
  std::optional<Evaluation> evaluation;
  std::optional<PredictionGrid> grid;

  // analyze
  std::optional<CorrelationReport> correlation;
  std::optional<ShapleyReport> shapley;

  bool has(Stage s) const { return stage >= static_cast<int>(s); }
  /// Throws Error(prerequisite) naming the command that produces `s`.
  void require(Stage s) const;
  std::vector<NodeId> hotspot_nodes() const;
};

/// Binary container: "ULWS" magic, u32 version, u64 payload size, u64
/// FNV-1a checksum, then a CBOR payload. Loading checks all four.
void save_workspace(const Workspace& w, const std::filesystem::path& path);
Workspace load_workspace(const std::filesystem::path& path);

std::string serialize_workspace(const Workspace& w);
Workspace deserialize_workspace(const std::string& bytes);

}  // namespace urbanlens
