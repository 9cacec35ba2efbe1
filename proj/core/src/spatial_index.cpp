#include "urbanlens/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace urbanlens {

namespace {

struct Candidate {
  double d2;
  ItemId id;
};

// Max-heap order on (distance, id): the worst kept candidate on top.
bool worse(const Candidate& a, const Candidate& b) {
  return a.d2 < b.d2 || (a.d2 == b.d2 && a.id < b.id);
}

Box bounding_square(std::span<const QuadTree::Item> items) {
  Box box{items[0].point.x, items[0].point.y, items[0].point.x, items[0].point.y};
  for (const auto& it : items) {
    box.min_x = std::min(box.min_x, it.point.x);
    box.min_y = std::min(box.min_y, it.point.y);
    box.max_x = std::max(box.max_x, it.point.x);
    box.max_y = std::max(box.max_y, it.point.y);
  }
  const double side = std::max({box.max_x - box.min_x, box.max_y - box.min_y, 1e-9});
  box.max_x = box.min_x + side;
  box.max_y = box.min_y + side;
  return box;
}

}  // namespace

QuadTree::QuadTree(std::span<const IndexedPoint> points, const GeoPoint& origin,
                   IndexConfig config)
    : origin_(origin), config_(config) {
  items_.reserve(points.size());
  for (const auto& p : points) items_.push_back({project(p.location, origin), p.id});
  build();
}

QuadTree::QuadTree(std::vector<Item> items, const GeoPoint& origin, IndexConfig config)
    : origin_(origin), config_(config), items_(std::move(items)) {
  build();
}

void QuadTree::build() {
  if (config_.leaf_capacity == 0) throw std::invalid_argument("leaf capacity must be >= 1");
  if (items_.empty()) return;
  Node root;
  root.box = bounding_square(items_);
  root.begin = 0;
  root.end = static_cast<std::uint32_t>(items_.size());
  nodes_.push_back(root);
  // Breadth-first so children of one node are contiguous.
  for (std::size_t i = 0; i < nodes_.size(); ++i) split(i);
}

void QuadTree::split(std::size_t node_index) {
  const Node node = nodes_[node_index];
  if (node.end - node.begin <= config_.leaf_capacity || node.depth >= config_.max_depth) return;

  const double mx = 0.5 * (node.box.min_x + node.box.max_x);
  const double my = 0.5 * (node.box.min_y + node.box.max_y);
  auto first = items_.begin() + node.begin;
  auto last = items_.begin() + node.end;
  // Quadrant order: SW, SE, NW, NE. Points on a midline go to the upper/right side.
  auto south_end = std::partition(first, last, [my](const Item& it) { return it.point.y < my; });
  auto sw_end = std::partition(first, south_end, [mx](const Item& it) { return it.point.x < mx; });
  auto nw_end = std::partition(south_end, last, [mx](const Item& it) { return it.point.x < mx; });

  const auto offset = [&](auto it) { return static_cast<std::uint32_t>(it - items_.begin()); };
  const std::uint32_t bounds[5] = {node.begin, offset(sw_end), offset(south_end), offset(nw_end),
                                   node.end};
  const Box boxes[4] = {
      {node.box.min_x, node.box.min_y, mx, my},
      {mx, node.box.min_y, node.box.max_x, my},
      {node.box.min_x, my, mx, node.box.max_y},
      {mx, my, node.box.max_x, node.box.max_y},
  };

  const auto first_child = static_cast<std::int32_t>(nodes_.size());
  for (int q = 0; q < 4; ++q) {
    Node child;
    child.box = boxes[q];
    child.begin = bounds[q];
    child.end = bounds[q + 1];
    child.depth = node.depth + 1;
    nodes_.push_back(child);
  }
  nodes_[node_index].first_child = first_child;
}

LensResult QuadTree::knn(const ProjectedPoint& q, std::size_t k) const {
  LensResult result;
  if (k == 0 || items_.empty()) return result;
  k = std::min(k, items_.size());

  std::vector<Candidate> best;  // heap, worst on top
  best.reserve(k + 1);

  using Pending = std::pair<double, std::int32_t>;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> frontier;
  frontier.emplace(nodes_[0].box.squared_distance_to(q), 0);

  while (!frontier.empty()) {
    const auto [box_d2, index] = frontier.top();
    frontier.pop();
    // Boxes at exactly the current k-th distance may still hold a lower id.
    if (best.size() == k && box_d2 > best.front().d2) break;

    const Node& node = nodes_[static_cast<std::size_t>(index)];
    if (node.leaf()) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const Candidate c{squared_distance(items_[i].point, q), items_[i].id};
        if (best.size() < k) {
          best.push_back(c);
          std::push_heap(best.begin(), best.end(), worse);
        } else if (worse(c, best.front())) {
          std::pop_heap(best.begin(), best.end(), worse);
          best.back() = c;
          std::push_heap(best.begin(), best.end(), worse);
        }
      }
      continue;
    }
    for (int c = 0; c < 4; ++c) {
      const auto child = node.first_child + c;
      const Node& cn = nodes_[static_cast<std::size_t>(child)];
      if (cn.begin == cn.end) continue;
      const double d2 = cn.box.squared_distance_to(q);
      if (best.size() == k && d2 > best.front().d2) continue;
      frontier.emplace(d2, child);
    }
  }

  std::sort_heap(best.begin(), best.end(), worse);
  result.members.reserve(best.size());
  for (const auto& c : best) result.members.push_back(c.id);
  result.radius = std::sqrt(best.back().d2);
  return result;
}

std::vector<ItemId> QuadTree::within(const ProjectedPoint& q, double radius) const {
  std::vector<ItemId> out;
  if (items_.empty() || radius < 0.0) return out;
  const double r2 = radius * radius;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.box.squared_distance_to(q) > r2) continue;
    if (node.leaf()) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        if (squared_distance(items_[i].point, q) <= r2) out.push_back(items_[i].id);
      }
      continue;
    }
    for (int c = 0; c < 4; ++c) stack.push_back(node.first_child + c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

QuadTree build_index(std::span<const IndexedPoint> points, const GeoPoint& origin,
                     IndexConfig config) {
  return QuadTree(points, origin, config);
}

LensResult lens(const QuadTree& index, const GeoPoint& cursor, std::size_t k) {
  return index.knn(project(cursor, index.origin()), k);
}

}  // namespace urbanlens
