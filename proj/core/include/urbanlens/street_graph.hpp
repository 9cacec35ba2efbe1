#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "urbanlens/geo.hpp"
#include "urbanlens/layers.hpp"
#include "urbanlens/spatial_index.hpp"

namespace urbanlens {

using Polyline = std::vector<GeoPoint>;

struct StreetEdge {
  NodeId a = 0;
  NodeId b = 0;
  double length_m = 0.0;
};

struct Neighbor {
  NodeId node;
  double length_m;
};

/// Undirected street graph. Nodes are corners (and polyline vertices),
/// edges are street segments weighted by their projected length.
class StreetGraph {
 public:
  StreetGraph() = default;
  StreetGraph(Projection projection, std::vector<GeoPoint> nodes, std::vector<StreetEdge> edges,
              IndexConfig index_config = {});

  const Projection& projection() const { return projection_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::span<const GeoPoint> nodes() const { return nodes_; }
  std::span<const ProjectedPoint> planar() const { return planar_; }
  std::span<const StreetEdge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId n) const { return adjacency_[n]; }
  std::size_t degree(NodeId n) const { return adjacency_[n].size(); }
  const QuadTree& index() const { return index_; }

 private:
  Projection projection_;
  std::vector<GeoPoint> nodes_;
  std::vector<ProjectedPoint> planar_;
  std::vector<StreetEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  QuadTree index_;
};

struct GraphBuildOptions {
  /// Vertices closer than this share one node.
  double snap_tolerance_m = 0.5;
  /// Projection origin; defaults to the centroid of all vertices.
  std::optional<GeoPoint> origin;
  IndexConfig index;
};

/// Throws Error(invalid_argument, "empty street network") when there is no
/// segment to build from.
StreetGraph build_graph(std::span<const Polyline> streets, const GraphBuildOptions& options = {});

enum class NodeClass : std::uint8_t { dead_end, near_dead_end, regular };
const char* to_string(NodeClass c);

/// Dead end: degree 1 or adjacent to a degree-1 node. Near dead end: within
/// `near_path_m` (inclusive) of a dead end along the graph. Otherwise regular.
std::vector<NodeClass> classify_nodes(const StreetGraph& g, double near_path_m = 100.0);

/// Closest node; ties go to the lowest id. Requires a non-empty graph.
NodeId nearest_corner(const StreetGraph& g, const GeoPoint& p);
NodeId nearest_corner(const StreetGraph& g, const ProjectedPoint& p);

using TransportCounts = std::array<std::uint32_t, kTransportCategories>;

/// Transport facilities indexed in the graph's projection.
class FacilityIndex {
 public:
  FacilityIndex() = default;
  FacilityIndex(std::span<const Facility> facilities, const Projection& projection);
  FacilityIndex(std::span<const ProjectedPoint> points,
                std::span<const TransportCategory> categories, const GeoPoint& origin);

  const QuadTree& index() const { return index_; }
  TransportCategory category(ItemId id) const { return categories_[id]; }

 private:
  QuadTree index_;
  std::vector<TransportCategory> categories_;
};

/// Facilities at distance <= radius (inclusive) of the node, per category.
TransportCounts radius_count(const FacilityIndex& facilities, const ProjectedPoint& node,
                             double radius_m = 200.0);

/// 1 iff some polygon lies within radius (inclusive; interior distance is 0).
int favela_flag(const ProjectedPoint& node, std::span<const PlanarShape> favelas,
                double radius_m = 500.0);

struct PlanarTract {
  PlanarShape shape;
  CensusValues indicators{};
};

/// Values of the containing tract. Nodes within `boundary_eps_m` of several
/// tracts get the arithmetic mean of those tracts; nodes in no tract take
/// the nearest tract by boundary distance (lowest index on ties).
CensusValues census_assign(const ProjectedPoint& node, std::span<const PlanarTract> tracts,
                           double boundary_eps_m = 1.0);

struct PlanarStation {
  std::string id;
  ProjectedPoint location;
  const WeatherStation* source = nullptr;
};

/// Inverse-distance weighted climate at one month. A station closer than
/// 1 m supplies its values exactly. Throws Error(ingest) naming the station
/// when it has no record for `month`.
Climate idw_weather(const ProjectedPoint& node, std::span<const PlanarStation> stations,
                    YearMonth month);

}  // namespace urbanlens
