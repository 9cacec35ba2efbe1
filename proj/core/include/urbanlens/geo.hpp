#pragma once

#include <span>
#include <vector>

namespace urbanlens {

inline constexpr double kEarthRadiusM = 6371000.0;

/// WGS-84 coordinate in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Local planar coordinate in meters relative to a projection origin.
struct ProjectedPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const ProjectedPoint&, const ProjectedPoint&) = default;
};

/// Equirectangular projection:
///   x = R * (lon - lon0) * cos(lat0) * pi/180,  y = R * (lat - lat0) * pi/180
ProjectedPoint project(const GeoPoint& p, const GeoPoint& origin);
GeoPoint unproject(const ProjectedPoint& p, const GeoPoint& origin);

/// Binds a fixed origin so callers do not pass it around.
class Projection {
 public:
  Projection() = default;
  explicit Projection(GeoPoint origin) : origin_(origin) {}

  const GeoPoint& origin() const { return origin_; }
  ProjectedPoint operator()(const GeoPoint& p) const { return project(p, origin_); }
  GeoPoint inverse(const ProjectedPoint& p) const { return unproject(p, origin_); }

 private:
  GeoPoint origin_{};
};

/// Mean latitude/longitude; (0,0) for an empty set.
GeoPoint centroid(std::span<const GeoPoint> points);

double squared_distance(const ProjectedPoint& a, const ProjectedPoint& b);
double distance(const ProjectedPoint& a, const ProjectedPoint& b);
double segment_distance(const ProjectedPoint& p, const ProjectedPoint& a,
                        const ProjectedPoint& b);

struct Box {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(const ProjectedPoint& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  /// Squared distance from p to the closest point of the box (0 inside).
  double squared_distance_to(const ProjectedPoint& p) const;
};

/// Geographic bounding box in degrees. Inclusive on all sides.
struct GeoBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  bool contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
  }
  bool intersects(const GeoBox& o) const {
    return min_lon <= o.max_lon && o.min_lon <= max_lon && min_lat <= o.max_lat &&
           o.min_lat <= max_lat;
  }
  static GeoBox around(std::span<const GeoPoint> points);
};

/// Closed ring; the first vertex is not repeated at the end.
using Ring = std::vector<GeoPoint>;

/// Outer ring followed by optional holes, as in a GeoJSON Polygon.
struct Polygon {
  std::vector<Ring> rings;
};

/// Polygon already projected to meters, ready for repeated distance queries.
class PlanarPolygon {
 public:
  PlanarPolygon(const Polygon& polygon, const Projection& projection);

  bool contains(const ProjectedPoint& p) const;
  /// 0 for points inside; otherwise distance to the nearest ring edge.
  double distance(const ProjectedPoint& p) const;
  double boundary_distance(const ProjectedPoint& p) const;
  double area() const;
  ProjectedPoint area_centroid() const;
  const Box& bounds() const { return bounds_; }

 private:
  std::vector<std::vector<ProjectedPoint>> rings_;
  Box bounds_{};
};

/// Planar polygon set for records made of several parts (multipolygons).
class PlanarShape {
 public:
  PlanarShape() = default;
  PlanarShape(std::span<const Polygon> parts, const Projection& projection);

  double distance(const ProjectedPoint& p) const;
  double boundary_distance(const ProjectedPoint& p) const;
  /// Area-weighted centroid of all parts.
  ProjectedPoint centroid() const;
  bool empty() const { return parts_.empty(); }

 private:
  std::vector<PlanarPolygon> parts_;
};

}  // namespace urbanlens
