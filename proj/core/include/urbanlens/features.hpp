#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "urbanlens/crime_sim.hpp"
#include "urbanlens/layers.hpp"
#include "urbanlens/street_graph.hpp"

namespace urbanlens {

inline constexpr std::size_t kNodeFeatureCount = 26;
inline constexpr std::size_t kTripFeatureCount = 2 * kNodeFeatureCount;

/// Column order of the per-corner feature vector.
enum class Feature : std::size_t {
  vehicle_theft_count,
  phone_theft_count,
  pickup_count,
  dropoff_count,
  tmax_c,
  tmin_c,
  precip_mm,
  bus_stop_count,
  terminal_count,
  subway_count,
  train_count,
  favela_flag,
  income,
  householder_income,
  unemployment,
  literacy_7_15,
  pct_under_18,
  pct_18_65,
  pct_over_65,
  class_dead_end,
  class_near_dead_end,
  class_regular,
  node_degree,
  hotspot_stationary_prob,
  hotspot_flag,
  hotspot_count,
};

/// The eight thematic groups the features roll up into.
enum class ThematicLayer : std::size_t {
  crime,
  trips,
  weather,
  transport,
  favelas,
  socioeconomic,
  graph,
  hotspots,
};
inline constexpr std::size_t kThematicLayerCount = 8;

extern const std::array<std::string_view, kNodeFeatureCount> kNodeFeatureNames;
extern const std::array<ThematicLayer, kNodeFeatureCount> kNodeFeatureLayer;
extern const std::array<std::string_view, kThematicLayerCount> kThematicLayerNames;

/// "o_<name>" for origin columns followed by "d_<name>" for destination ones.
std::vector<std::string> trip_feature_names();
/// Layer of each of the 52 trip features.
std::vector<std::size_t> trip_feature_layers();

struct NodeFeatures {
  std::array<double, kNodeFeatureCount> values{};

  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
  friend bool operator==(const NodeFeatures&, const NodeFeatures&) = default;
};

struct AggregationParams {
  double near_dead_end_m = 100.0;
  double transport_radius_m = 200.0;
  double favela_radius_m = 500.0;
  double census_boundary_m = 1.0;
};

/// Everything aggregated onto the corners. A null pointer marks a layer that
/// was never loaded; aggregate_all refuses to run without it.
struct AggregationInputs {
  const std::vector<CrimeEvent>* crimes = nullptr;
  const std::vector<Facility>* facilities = nullptr;
  const std::vector<FavelaArea>* favelas = nullptr;
  const std::vector<CensusTract>* tracts = nullptr;
  const std::vector<WeatherStation>* stations = nullptr;
  const std::vector<HotspotResult>* hotspots = nullptr;
  const std::vector<TripRecord>* trips = nullptr;
};

/// Per-corner feature vectors. Crimes, pickups and dropoffs are counted by
/// nearest corner; climate is the mean over all recorded months of the
/// inverse-distance interpolation. Throws Error(missing_layer) naming the
/// first absent input.
std::vector<NodeFeatures> aggregate_all(const StreetGraph& g, std::span<const NodeClass> classes,
                                        const AggregationInputs& inputs,
                                        const AggregationParams& params = {});

}  // namespace urbanlens
