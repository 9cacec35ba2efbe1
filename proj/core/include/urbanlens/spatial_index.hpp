#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urbanlens/geo.hpp"

namespace urbanlens {

using ItemId = std::uint32_t;

struct IndexConfig {
  std::size_t leaf_capacity = 16;
  int max_depth = 24;
};

/// Answer of a KNN or lens query. Members are ordered by ascending distance,
/// ties by ascending id; radius is the distance to the last member.
struct LensResult {
  std::vector<ItemId> members;
  double radius = 0.0;

  friend bool operator==(const LensResult&, const LensResult&) = default;
};

struct IndexedPoint {
  GeoPoint location;
  ItemId id = 0;
};

/// Static point quadtree in projected meters.
///
/// Built once from a point set and immutable afterwards, so a single
/// instance can be shared by concurrent readers. Leaves hold at most
/// `leaf_capacity` items unless they sit at `max_depth` (e.g. many points
/// at the same coordinate).
class QuadTree {
 public:
  struct Node {
    Box box;
    // Internal nodes: index of the first of four consecutive children.
    // Leaves: -1.
    std::int32_t first_child = -1;
    std::uint32_t begin = 0;  // range into items_ (leaves only)
    std::uint32_t end = 0;
    int depth = 0;

    bool leaf() const { return first_child < 0; }
  };

  struct Item {
    ProjectedPoint point;
    ItemId id;
  };

  QuadTree() = default;
  QuadTree(std::span<const IndexedPoint> points, const GeoPoint& origin,
           IndexConfig config = {});
  QuadTree(std::vector<Item> items, const GeoPoint& origin, IndexConfig config = {});

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const GeoPoint& origin() const { return origin_; }
  const IndexConfig& config() const { return config_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Item> items() const { return items_; }

  /// Exact k nearest neighbours of q. k larger than size() returns all items.
  LensResult knn(const ProjectedPoint& q, std::size_t k) const;

  /// Ids of items with distance <= radius (inclusive), ascending by id.
  std::vector<ItemId> within(const ProjectedPoint& q, double radius) const;

 private:
  void build();
  void split(std::size_t node_index);

  GeoPoint origin_{};
  IndexConfig config_{};
  std::vector<Item> items_;
  std::vector<Node> nodes_;
};

QuadTree build_index(std::span<const IndexedPoint> points, const GeoPoint& origin,
                     IndexConfig config = {});

inline LensResult knn(const QuadTree& index, const ProjectedPoint& q, std::size_t k) {
  return index.knn(q, k);
}

/// Visibility-preserving lens: a brush holding exactly min(k, N) points
/// around the cursor. The radius shrinks where the data is dense.
LensResult lens(const QuadTree& index, const GeoPoint& cursor, std::size_t k);

}  // namespace urbanlens
