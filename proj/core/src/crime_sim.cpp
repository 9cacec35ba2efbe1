#include "urbanlens/crime_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urbanlens/error.hpp"
#include "urbanlens/random.hpp"

namespace urbanlens {

std::vector<NodeActivitySeries> activity_series(const StreetGraph& g,
                                                std::span<const CrimeEvent> crimes) {
  std::vector<NodeActivitySeries> series(g.node_count());
  for (NodeId n = 0; n < series.size(); ++n) series[n].node = n;
  for (const auto& c : crimes) {
    auto& s = series[nearest_corner(g, c.location)];
    s.active[static_cast<std::size_t>(c.time.month - 1)] = 1;
    ++s.total;
  }
  return series;
}

double stationary_active(double stay_active, double become_active) {
  const double denom = 1.0 - stay_active + become_active;
  if (denom <= 0.0) return 1.0;
  return become_active / denom;
}

std::vector<HotspotResult> detect_hotspots(std::span<const NodeActivitySeries> series,
                                           const HotspotParams& params) {
  std::vector<HotspotResult> out;
  out.reserve(series.size());
  for (const auto& s : series) {
    // Transition counts from-state x to-state.
    double from_active = 0.0;
    double active_to_active = 0.0;
    double from_inactive = 0.0;
    double inactive_to_active = 0.0;
    for (std::size_t t = 1; t < s.active.size(); ++t) {
      if (s.active[t - 1]) {
        from_active += 1.0;
        active_to_active += s.active[t];
      } else {
        from_inactive += 1.0;
        inactive_to_active += s.active[t];
      }
    }
    HotspotResult r;
    r.node = s.node;
    r.count = s.total;
    r.stay_active = (active_to_active + 1.0) / (from_active + 2.0);
    r.become_active = (inactive_to_active + 1.0) / (from_inactive + 2.0);
    r.stationary_active = stationary_active(r.stay_active, r.become_active);
    r.is_hotspot = r.stationary_active >= params.theta && r.count >= params.min_count;
    out.push_back(r);
  }
  return out;
}

TripSynthesis synth_trips(const StreetGraph& g, std::span<const CensusTract> tracts,
                          std::span<const NodeId> hotspot_nodes, const TripSynthConfig& config) {
  if (tracts.empty()) throw Error(ErrorCode::missing_layer, "socioeconomic tracts are required");
  const auto& projection = g.projection();

  TripSynthesis out;
  std::vector<double> density;
  density.reserve(tracts.size());
  for (const auto& tract : tracts) {
    double area = 0.0;
    for (const auto& part : tract.parts) area += PlanarPolygon(part, projection).area();
    density.push_back(area > 0.0 ? tract.population / area : 0.0);
    const PlanarShape shape(tract.parts, projection);
    out.tract_nodes.push_back(nearest_corner(g, shape.centroid()));
  }
  const WeightedSampler tract_sampler(density);
  out.tract_probabilities = tract_sampler.probabilities();

  // Which tract endpoints lie within the labeling radius of a hotspot.
  std::vector<QuadTree::Item> hot_items;
  for (NodeId h : hotspot_nodes) hot_items.push_back({g.planar()[h], h});
  const QuadTree hot_index(std::move(hot_items), projection.origin());
  std::vector<bool> near(tracts.size(), false);
  double near_mass = 0.0;
  for (std::size_t t = 0; t < tracts.size(); ++t) {
    const auto hit = hot_index.knn(g.planar()[out.tract_nodes[t]], 1);
    near[t] = !hit.members.empty() && hit.radius <= config.label_radius_m;
    if (near[t]) near_mass += out.tract_probabilities[t];
  }
  out.no_hotspots = hotspot_nodes.empty();
  out.near_hotspot_share = 1.0 - (1.0 - near_mass) * (1.0 - near_mass);
  out.occurrence_probability =
      out.near_hotspot_share > 0.0
          ? std::min(1.0, config.occurrence_share / out.near_hotspot_share)
          : 0.0;

  const WeightedSampler period_sampler(config.period_weights);
  const WeightedSampler weekday_sampler(config.weekday_weights);
  Rng rng(config.seed);
  out.trips.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    const std::size_t o = tract_sampler(rng);
    const std::size_t d = tract_sampler(rng);
    TripRecord trip;
    trip.origin = out.tract_nodes[o];
    trip.destination = out.tract_nodes[d];
    trip.period = static_cast<Period>(period_sampler(rng));
    trip.weekday = static_cast<int>(weekday_sampler(rng));
    trip.month = static_cast<int>(rng.below(12)) + 1;
    const double u = rng.uniform();
    if ((near[o] || near[d]) && u < out.occurrence_probability) {
      trip.label = TripLabel::occurrence;
    }
    out.trips.push_back(trip);
  }
  return out;
}

}  // namespace urbanlens
