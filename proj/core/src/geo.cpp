#include "urbanlens/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace urbanlens {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

ProjectedPoint project(const GeoPoint& p, const GeoPoint& origin) {
  const double scale = kEarthRadiusM * kDegToRad;
  return {scale * (p.lon - origin.lon) * std::cos(origin.lat * kDegToRad),
          scale * (p.lat - origin.lat)};
}

GeoPoint unproject(const ProjectedPoint& p, const GeoPoint& origin) {
  const double scale = kEarthRadiusM * kDegToRad;
  return {origin.lat + p.y / scale,
          origin.lon + p.x / (scale * std::cos(origin.lat * kDegToRad))};
}

GeoPoint centroid(std::span<const GeoPoint> points) {
  if (points.empty()) return {};
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const auto n = static_cast<double>(points.size());
  return {lat / n, lon / n};
}

double squared_distance(const ProjectedPoint& a, const ProjectedPoint& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const ProjectedPoint& a, const ProjectedPoint& b) {
  return std::sqrt(squared_distance(a, b));
}

double segment_distance(const ProjectedPoint& p, const ProjectedPoint& a,
                        const ProjectedPoint& b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return distance(p, a);
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, {a.x + t * vx, a.y + t * vy});
}

double Box::squared_distance_to(const ProjectedPoint& p) const {
  const double dx = p.x < min_x ? min_x - p.x : (p.x > max_x ? p.x - max_x : 0.0);
  const double dy = p.y < min_y ? min_y - p.y : (p.y > max_y ? p.y - max_y : 0.0);
  return dx * dx + dy * dy;
}

GeoBox GeoBox::around(std::span<const GeoPoint> points) {
  if (points.empty()) return {};
  GeoBox box{points[0].lon, points[0].lat, points[0].lon, points[0].lat};
  for (const auto& p : points) {
    box.min_lon = std::min(box.min_lon, p.lon);
    box.max_lon = std::max(box.max_lon, p.lon);
    box.min_lat = std::min(box.min_lat, p.lat);
    box.max_lat = std::max(box.max_lat, p.lat);
  }
  return box;
}

PlanarPolygon::PlanarPolygon(const Polygon& polygon, const Projection& projection) {
  bounds_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};
  for (const auto& ring : polygon.rings) {
    std::vector<ProjectedPoint> planar;
    planar.reserve(ring.size());
    for (const auto& g : ring) {
      const auto p = projection(g);
      bounds_.min_x = std::min(bounds_.min_x, p.x);
      bounds_.min_y = std::min(bounds_.min_y, p.y);
      bounds_.max_x = std::max(bounds_.max_x, p.x);
      bounds_.max_y = std::max(bounds_.max_y, p.y);
      planar.push_back(p);
    }
    rings_.push_back(std::move(planar));
  }
}

bool PlanarPolygon::contains(const ProjectedPoint& p) const {
  // Even-odd rule across all rings handles holes.
  bool inside = false;
  for (const auto& ring : rings_) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const auto& a = ring[i];
      const auto& b = ring[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
        if (p.x < x) inside = !inside;
      }
    }
  }
  return inside;
}

double PlanarPolygon::boundary_distance(const ProjectedPoint& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ring : rings_) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      best = std::min(best, segment_distance(p, ring[j], ring[i]));
    }
  }
  return best;
}

double PlanarPolygon::distance(const ProjectedPoint& p) const {
  if (contains(p)) return 0.0;
  return boundary_distance(p);
}

double PlanarPolygon::area() const {
  double total = 0.0;
  for (std::size_t r = 0; r < rings_.size(); ++r) {
    const auto& ring = rings_[r];
    double twice = 0.0;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      twice += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    }
    const double a = std::abs(twice) * 0.5;
    total += r == 0 ? a : -a;
  }
  return total;
}

ProjectedPoint PlanarPolygon::area_centroid() const {
  if (rings_.empty() || rings_[0].empty()) return {};
  const auto& ring = rings_[0];
  double twice = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const double cross = ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    twice += cross;
    cx += (ring[j].x + ring[i].x) * cross;
    cy += (ring[j].y + ring[i].y) * cross;
  }
  if (twice == 0.0) {
    ProjectedPoint mean{};
    for (const auto& p : ring) {
      mean.x += p.x;
      mean.y += p.y;
    }
    const auto n = static_cast<double>(ring.size());
    return {mean.x / n, mean.y / n};
  }
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

PlanarShape::PlanarShape(std::span<const Polygon> parts, const Projection& projection) {
  parts_.reserve(parts.size());
  for (const auto& part : parts) parts_.emplace_back(part, projection);
}

double PlanarShape::distance(const ProjectedPoint& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& part : parts_) {
    if (part.bounds().squared_distance_to(p) > best * best) continue;
    best = std::min(best, part.distance(p));
    if (best == 0.0) break;
  }
  return best;
}

double PlanarShape::boundary_distance(const ProjectedPoint& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& part : parts_) best = std::min(best, part.boundary_distance(p));
  return best;
}

ProjectedPoint PlanarShape::centroid() const {
  double weight = 0.0;
  ProjectedPoint acc{};
  for (const auto& part : parts_) {
    const double a = part.area();
    const auto c = part.area_centroid();
    acc.x += a * c.x;
    acc.y += a * c.y;
    weight += a;
  }
  if (weight <= 0.0) return parts_.empty() ? ProjectedPoint{} : parts_.front().area_centroid();
  return {acc.x / weight, acc.y / weight};
}

}  // namespace urbanlens
