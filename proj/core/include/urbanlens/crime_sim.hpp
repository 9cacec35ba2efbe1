#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "urbanlens/layers.hpp"
#include "urbanlens/street_graph.hpp"

namespace urbanlens {

/// Monthly binary crime activity of one corner over the analysis year.
struct NodeActivitySeries {
  NodeId node = 0;
  std::array<std::uint8_t, 12> active{};  // 1 iff at least one crime that month
  std::uint32_t total = 0;                // crimes assigned to the corner
};

/// Assigns each crime to its nearest corner and builds one series per node.
std::vector<NodeActivitySeries> activity_series(const StreetGraph& g,
                                                std::span<const CrimeEvent> crimes);

/// Two-state (inactive/active) Markov chain fitted to a node's series.
struct HotspotResult {
  NodeId node = 0;
  double stay_active = 0.0;   // P(active -> active)
  double become_active = 0.0; // P(inactive -> active)
  double stationary_active = 0.0;
  bool is_hotspot = false;
  std::uint32_t count = 0;

  friend bool operator==(const HotspotResult&, const HotspotResult&) = default;
};

struct HotspotParams {
  double theta = 0.5;
  std::uint32_t min_count = 5;
};

/// Long-run share of time in the active state: b / (1 - a + b).
double stationary_active(double stay_active, double become_active);

/// Transition probabilities use add-one (Laplace) smoothing over the eleven
/// month-to-month transitions. A node is a hotspot when its stationary
/// activity is >= theta and it accumulated at least min_count crimes.
std::vector<HotspotResult> detect_hotspots(std::span<const NodeActivitySeries> series,
                                           const HotspotParams& params = {});

struct TripSynthConfig {
  std::size_t count = 87000;
  std::uint64_t seed = 20200101;
  double label_radius_m = 500.0;
  /// Expected occurrence share of all trips (1:90 occurrence:regular).
  double occurrence_share = 1.0 / 91.0;
  /// morning, afternoon, night, dawn
  std::array<double, 4> period_weights{0.30, 0.35, 0.25, 0.10};
  /// Mon..Sun
  std::array<double, 7> weekday_weights{0.155, 0.155, 0.155, 0.155, 0.155, 0.1125, 0.1125};
};

struct TripSynthesis {
  std::vector<TripRecord> trips;
  /// Probability that a trip with an endpoint near a hotspot is labeled occurrence.
  double occurrence_probability = 0.0;
  /// Expected share of trips with at least one endpoint near a hotspot.
  double near_hotspot_share = 0.0;
  /// Set when no hotspot exists (every trip is regular).
  bool no_hotspots = false;
  /// Nearest corner of each tract centroid, in tract order.
  std::vector<NodeId> tract_nodes;
  /// Tract sampling probabilities (normalized population density).
  std::vector<double> tract_probabilities;
};

/// Synthetic ride-hailing trips. Origin and destination tracts are drawn
/// independently with probability proportional to population density and
/// snapped to the corner nearest the tract centroid. Trips with an endpoint
/// within label_radius_m of a hotspot node become occurrences with a fixed
/// probability chosen so the expected occurrence share matches the config.
TripSynthesis synth_trips(const StreetGraph& g, std::span<const CensusTract> tracts,
                          std::span<const NodeId> hotspot_nodes, const TripSynthConfig& config);

}  // namespace urbanlens
