#include "urbanlens/features.hpp"

#include <set>
#include <string>

#include "urbanlens/error.hpp"

namespace urbanlens {

const std::array<std::string_view, kNodeFeatureCount> kNodeFeatureNames{
    "vehicle_theft_count",
    "phone_theft_count",
    "pickup_count",
    "dropoff_count",
    "tmax_c",
    "tmin_c",
    "precip_mm",
    "bus_stop_count",
    "terminal_count",
    "subway_count",
    "train_count",
    "favela_flag",
    "income",
    "householder_income",
    "unemployment",
    "literacy_7_15",
    "pct_under_18",
    "pct_18_65",
    "pct_over_65",
    "class_dead_end",
    "class_near_dead_end",
    "class_regular",
    "node_degree",
    "hotspot_stationary_prob",
    "hotspot_flag",
    "hotspot_count",
};

const std::array<ThematicLayer, kNodeFeatureCount> kNodeFeatureLayer{
    ThematicLayer::crime,         ThematicLayer::crime,         ThematicLayer::trips,
    ThematicLayer::trips,         ThematicLayer::weather,       ThematicLayer::weather,
    ThematicLayer::weather,       ThematicLayer::transport,     ThematicLayer::transport,
    ThematicLayer::transport,     ThematicLayer::transport,     ThematicLayer::favelas,
    ThematicLayer::socioeconomic, ThematicLayer::socioeconomic, ThematicLayer::socioeconomic,
    ThematicLayer::socioeconomic, ThematicLayer::socioeconomic, ThematicLayer::socioeconomic,
    ThematicLayer::socioeconomic, ThematicLayer::graph,         ThematicLayer::graph,
    ThematicLayer::graph,         ThematicLayer::graph,         ThematicLayer::hotspots,
    ThematicLayer::hotspots,      ThematicLayer::hotspots,
};

const std::array<std::string_view, kThematicLayerCount> kThematicLayerNames{
    "crime", "trips", "weather", "transport", "favelas", "socioeconomic", "graph", "hotspots"};

std::vector<std::string> trip_feature_names() {
  std::vector<std::string> names;
  names.reserve(kTripFeatureCount);
  for (auto n : kNodeFeatureNames) names.push_back("o_" + std::string(n));
  for (auto n : kNodeFeatureNames) names.push_back("d_" + std::string(n));
  return names;
}

std::vector<std::size_t> trip_feature_layers() {
  std::vector<std::size_t> layers;
  layers.reserve(kTripFeatureCount);
  for (int side = 0; side < 2; ++side) {
    for (auto l : kNodeFeatureLayer) layers.push_back(static_cast<std::size_t>(l));
  }
  return layers;
}

namespace {

template <typename T>
const T& require(const T* layer, const char* name) {
  if (layer == nullptr) {
    throw Error(ErrorCode::missing_layer, std::string("layer '") + name + "' is not loaded");
  }
  return *layer;
}

}  // namespace

std::vector<NodeFeatures> aggregate_all(const StreetGraph& g, std::span<const NodeClass> classes,
                                        const AggregationInputs& inputs,
                                        const AggregationParams& params) {
  const auto& crimes = require(inputs.crimes, "crime");
  const auto& facilities = require(inputs.facilities, "transport");
  const auto& favelas = require(inputs.favelas, "favelas");
  const auto& tracts = require(inputs.tracts, "socioeconomic");
  const auto& stations = require(inputs.stations, "weather");
  const auto& hotspots = require(inputs.hotspots, "hotspots");
  const auto& trips = require(inputs.trips, "trips");
  if (classes.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "node classification does not match the graph");
  }
  if (hotspots.size() != g.node_count()) {
    throw Error(ErrorCode::invalid_argument, "hotspot results do not cover every node");
  }
  if (stations.empty()) throw Error(ErrorCode::missing_layer, "layer 'weather' has no stations");

  const auto& projection = g.projection();
  std::vector<NodeFeatures> out(g.node_count());

  for (const auto& c : crimes) {
    auto& f = out[nearest_corner(g, c.location)];
    f[c.type == CrimeType::vehicle_theft ? Feature::vehicle_theft_count
                                         : Feature::phone_theft_count] += 1.0;
  }
  for (const auto& t : trips) {
    out.at(t.origin)[Feature::pickup_count] += 1.0;
    out.at(t.destination)[Feature::dropoff_count] += 1.0;
  }

  const FacilityIndex facility_index(facilities, projection);
  std::vector<PlanarShape> favela_shapes;
  favela_shapes.reserve(favelas.size());
  for (const auto& f : favelas) favela_shapes.emplace_back(f.parts, projection);
  std::vector<PlanarTract> planar_tracts;
  planar_tracts.reserve(tracts.size());
  for (const auto& t : tracts) planar_tracts.push_back({PlanarShape(t.parts, projection), t.indicators});
  std::vector<PlanarStation> planar_stations;
  std::set<YearMonth> months;
  for (const auto& s : stations) {
    planar_stations.push_back({s.id, projection(s.location), &s});
    for (const auto& [m, _] : s.monthly) months.insert(m);
  }

  for (NodeId n = 0; n < g.node_count(); ++n) {
    auto& f = out[n];
    const auto p = g.planar()[n];

    Climate mean{};
    for (YearMonth m : months) {
      const auto c = idw_weather(p, planar_stations, m);
      mean.tmax_c += c.tmax_c;
      mean.tmin_c += c.tmin_c;
      mean.precip_mm += c.precip_mm;
    }
    const double nm = months.empty() ? 1.0 : static_cast<double>(months.size());
    f[Feature::tmax_c] = mean.tmax_c / nm;
    f[Feature::tmin_c] = mean.tmin_c / nm;
    f[Feature::precip_mm] = mean.precip_mm / nm;

    const auto counts = radius_count(facility_index, p, params.transport_radius_m);
    f[Feature::bus_stop_count] = counts[0];
    f[Feature::terminal_count] = counts[1];
    f[Feature::subway_count] = counts[2];
    f[Feature::train_count] = counts[3];

    f[Feature::favela_flag] = favela_flag(p, favela_shapes, params.favela_radius_m);

    if (!planar_tracts.empty()) {
      const auto census = census_assign(p, planar_tracts, params.census_boundary_m);
      for (std::size_t i = 0; i < kCensusIndicators; ++i) {
        f.values[static_cast<std::size_t>(Feature::income) + i] = census[i];
      }
    }

    f[Feature::class_dead_end] = classes[n] == NodeClass::dead_end ? 1.0 : 0.0;
    f[Feature::class_near_dead_end] = classes[n] == NodeClass::near_dead_end ? 1.0 : 0.0;
    f[Feature::class_regular] = classes[n] == NodeClass::regular ? 1.0 : 0.0;
    f[Feature::node_degree] = static_cast<double>(g.degree(n));

    const auto& h = hotspots[n];
    f[Feature::hotspot_stationary_prob] = h.stationary_active;
    f[Feature::hotspot_flag] = h.is_hotspot ? 1.0 : 0.0;
    f[Feature::hotspot_count] = h.count;
  }
  return out;
}

}  // namespace urbanlens
