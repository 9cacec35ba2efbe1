#include "urbanlens/street_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "urbanlens/error.hpp"

namespace urbanlens {

StreetGraph::StreetGraph(Projection projection, std::vector<GeoPoint> nodes,
                         std::vector<StreetEdge> edges, IndexConfig index_config)
    : projection_(projection), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  planar_.reserve(nodes_.size());
  std::vector<QuadTree::Item> items;
  items.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    planar_.push_back(projection_(nodes_[i]));
    items.push_back({planar_.back(), static_cast<ItemId>(i)});
  }
  adjacency_.resize(nodes_.size());
  for (const auto& e : edges_) {
    if (e.a >= nodes_.size() || e.b >= nodes_.size() || e.a == e.b) {
      throw Error(ErrorCode::invalid_argument, "edge references an invalid node pair");
    }
    adjacency_[e.a].push_back({e.b, e.length_m});
    adjacency_[e.b].push_back({e.a, e.length_m});
  }
  index_ = QuadTree(std::move(items), projection_.origin(), index_config);
}

namespace {

struct CellKey {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<std::int64_t>{}(k.x * 73856093LL ^ k.y * 19349663LL);
  }
};

}  // namespace

StreetGraph build_graph(std::span<const Polyline> streets, const GraphBuildOptions& options) {
  std::vector<GeoPoint> all;
  for (const auto& line : streets) all.insert(all.end(), line.begin(), line.end());
  bool any_segment = false;
  for (const auto& line : streets) any_segment = any_segment || line.size() >= 2;
  if (!any_segment) throw Error(ErrorCode::invalid_argument, "empty street network");

  const Projection projection(options.origin.value_or(centroid(all)));
  const double tol = options.snap_tolerance_m;
  const double cell = std::max(tol, 1e-6);

  std::vector<GeoPoint> nodes;
  std::vector<ProjectedPoint> planar;
  std::unordered_map<CellKey, std::vector<NodeId>, CellHash> grid;

  auto snap = [&](const GeoPoint& g) -> NodeId {
    const auto p = projection(g);
    const CellKey key{static_cast<std::int64_t>(std::floor(p.x / cell)),
                      static_cast<std::int64_t>(std::floor(p.y / cell))};
    NodeId best = std::numeric_limits<NodeId>::max();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find({key.x + dx, key.y + dy});
        if (it == grid.end()) continue;
        for (NodeId n : it->second) {
          const double d = distance(planar[n], p);
          if (d <= tol && (d < best_d || (d == best_d && n < best))) {
            best = n;
            best_d = d;
          }
        }
      }
    }
    if (best != std::numeric_limits<NodeId>::max()) return best;
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(g);
    planar.push_back(p);
    grid[key].push_back(id);
    return id;
  };

  std::vector<StreetEdge> edges;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& line : streets) {
    if (line.size() < 2) continue;
    NodeId prev = snap(line[0]);
    for (std::size_t i = 1; i < line.size(); ++i) {
      const NodeId cur = snap(line[i]);
      if (cur != prev) {
        const auto lo = std::min(prev, cur);
        const auto hi = std::max(prev, cur);
        if (seen.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second) {
          edges.push_back({lo, hi, distance(planar[lo], planar[hi])});
        }
      }
      prev = cur;
    }
  }
  return StreetGraph(projection, std::move(nodes), std::move(edges), options.index);
}

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::dead_end: return "dead_end";
    case NodeClass::near_dead_end: return "near_dead_end";
    case NodeClass::regular: return "regular";
  }
  return "?";
}

std::vector<NodeClass> classify_nodes(const StreetGraph& g, double near_path_m) {
  const std::size_t n = g.node_count();
  std::vector<NodeClass> classes(n, NodeClass::regular);
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) != 1) continue;
    classes[v] = NodeClass::dead_end;
    for (const auto& nb : g.neighbors(v)) classes[nb.node] = NodeClass::dead_end;
  }

  // Multi-source Dijkstra from every dead end, bounded by near_path_m.
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (NodeId v = 0; v < n; ++v) {
    if (classes[v] == NodeClass::dead_end) {
      dist[v] = 0.0;
      queue.emplace(0.0, v);
    }
  }
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const auto& nb : g.neighbors(v)) {
      const double nd = d + nb.length_m;
      if (nd <= near_path_m && nd < dist[nb.node]) {
        dist[nb.node] = nd;
        queue.emplace(nd, nb.node);
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (classes[v] != NodeClass::dead_end && dist[v] <= near_path_m) {
      classes[v] = NodeClass::near_dead_end;
    }
  }
  return classes;
}

NodeId nearest_corner(const StreetGraph& g, const ProjectedPoint& p) {
  if (g.node_count() == 0) throw Error(ErrorCode::invalid_argument, "graph has no nodes");
  return g.index().knn(p, 1).members.front();
}

NodeId nearest_corner(const StreetGraph& g, const GeoPoint& p) {
  return nearest_corner(g, g.projection()(p));
}

FacilityIndex::FacilityIndex(std::span<const Facility> facilities, const Projection& projection) {
  std::vector<QuadTree::Item> items;
  items.reserve(facilities.size());
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    items.push_back({projection(facilities[i].location), static_cast<ItemId>(i)});
    categories_.push_back(facilities[i].category);
  }
  index_ = QuadTree(std::move(items), projection.origin());
}

FacilityIndex::FacilityIndex(std::span<const ProjectedPoint> points,
                             std::span<const TransportCategory> categories,
                             const GeoPoint& origin)
    : categories_(categories.begin(), categories.end()) {
  if (points.size() != categories.size()) {
    throw Error(ErrorCode::invalid_argument, "facility points and categories differ in length");
  }
  std::vector<QuadTree::Item> items;
  for (std::size_t i = 0; i < points.size(); ++i) {
    items.push_back({points[i], static_cast<ItemId>(i)});
  }
  index_ = QuadTree(std::move(items), origin);
}

TransportCounts radius_count(const FacilityIndex& facilities, const ProjectedPoint& node,
                             double radius_m) {
  TransportCounts counts{};
  for (ItemId id : facilities.index().within(node, radius_m)) {
    ++counts[static_cast<std::size_t>(facilities.category(id))];
  }
  return counts;
}

int favela_flag(const ProjectedPoint& node, std::span<const PlanarShape> favelas,
                double radius_m) {
  for (const auto& shape : favelas) {
    if (shape.distance(node) <= radius_m) return 1;
  }
  return 0;
}

CensusValues census_assign(const ProjectedPoint& node, std::span<const PlanarTract> tracts,
                           double boundary_eps_m) {
  CensusValues sum{};
  std::size_t matches = 0;
  std::size_t nearest = 0;
  double nearest_d = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < tracts.size(); ++t) {
    const double d = tracts[t].shape.distance(node);
    if (d <= boundary_eps_m) {
      for (std::size_t i = 0; i < kCensusIndicators; ++i) sum[i] += tracts[t].indicators[i];
      ++matches;
    }
    if (d < nearest_d) {
      nearest_d = d;
      nearest = t;
    }
  }
  if (matches == 0) {
    if (tracts.empty()) return sum;
    return tracts[nearest].indicators;
  }
  if (matches == 1) return sum;
  for (auto& v : sum) v /= static_cast<double>(matches);
  return sum;
}

Climate idw_weather(const ProjectedPoint& node, std::span<const PlanarStation> stations,
                    YearMonth month) {
  if (stations.empty()) throw Error(ErrorCode::missing_layer, "no weather stations");
  std::vector<const Climate*> values;
  values.reserve(stations.size());
  for (const auto& s : stations) {
    const auto it = s.source->monthly.find(month);
    if (it == s.source->monthly.end()) {
      throw Error(ErrorCode::ingest, "weather station '" + s.id + "' has no record for " +
                                         std::to_string(month / 100) + "-" +
                                         (month % 100 < 10 ? "0" : "") +
                                         std::to_string(month % 100));
    }
    values.push_back(&it->second);
  }
  std::vector<double> dist;
  dist.reserve(stations.size());
  for (const auto& s : stations) dist.push_back(distance(node, s.location));
  const auto closest = static_cast<std::size_t>(
      std::min_element(dist.begin(), dist.end()) - dist.begin());
  if (dist[closest] < 1.0) return *values[closest];

  double wsum = 0.0;
  Climate acc{};
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double w = 1.0 / dist[i];
    wsum += w;
    acc.tmax_c += w * values[i]->tmax_c;
    acc.tmin_c += w * values[i]->tmin_c;
    acc.precip_mm += w * values[i]->precip_mm;
  }
  return {acc.tmax_c / wsum, acc.tmin_c / wsum, acc.precip_mm / wsum};
}

}  // namespace urbanlens
