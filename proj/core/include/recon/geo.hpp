#pragma once

#include <span>
#include <vector>

namespace recon {

/// WGS84 position in degrees.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Planar position in meters (local east/north).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
};

using GeoRing = std::vector<GeoPoint>;
using Ring = std::vector<Vec2>;

/// Axis-aligned rectangle in planar meters.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  [[nodiscard]] double width() const { return max_x - min_x; }
  [[nodiscard]] double height() const { return max_y - min_y; }
  [[nodiscard]] double area() const { return width() * height(); }
  [[nodiscard]] bool contains(Vec2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  [[nodiscard]] Ring ring() const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Equirectangular projection about a fixed origin. Valid within one degree
/// of the origin in both axes; outside that window `forward` throws
/// RangeError.
class Projection {
 public:
  static constexpr double kEarthRadiusM = 6371008.8;
  static constexpr double kWindowDeg = 1.0;

  Projection() = default;
  explicit Projection(GeoPoint origin);

  [[nodiscard]] GeoPoint origin() const { return origin_; }
  [[nodiscard]] Vec2 forward(GeoPoint p) const;
  [[nodiscard]] GeoPoint inverse(Vec2 p) const;
  [[nodiscard]] std::vector<Vec2> forward(std::span<const GeoPoint> pts) const;
  [[nodiscard]] Ring forward_ring(const GeoRing& ring) const;

 private:
  GeoPoint origin_{};
  double cos_lat0_ = 1.0;
};

/// Projects `points` about `origin`.
std::vector<Vec2> project(std::span<const GeoPoint> points, GeoPoint origin);

double distance(Vec2 a, Vec2 b);
double polyline_length(std::span<const Vec2> polyline);

struct PolylineProjection {
  double distance_m = 0.0;
  Vec2 point;
  std::size_t segment = 0;
};

/// Exact minimum Euclidean distance from `p` to the polyline and the foot of
/// that distance. The first segment wins on ties. Throws GeometryError for
/// fewer than two vertices or zero total length.
PolylineProjection point_to_polyline(Vec2 p, std::span<const Vec2> polyline);

/// Signed shoelace area (counter-clockwise positive). Closing vertex optional.
double signed_area(std::span<const Vec2> ring);

/// Points this close to a ring edge count as on the boundary. Absorbs the
/// rounding of coordinates that went through text.
inline constexpr double kBoundaryToleranceM = 1e-6;

/// Point strictly inside the ring (boundary points are outside).
bool strictly_inside(Vec2 p, std::span<const Vec2> ring);
/// Point inside or on the boundary of the ring.
bool inside_or_on(Vec2 p, std::span<const Vec2> ring);

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// True when any part of the polyline touches the closed polygon region.
bool polyline_touches_polygon(std::span<const Vec2> polyline,
                              std::span<const Vec2> ring);

/// Clips a (possibly concave) ring against a rectangle. The result may contain
/// degenerate edges along the rectangle boundary; its area is exact.
Ring clip_to_rect(std::span<const Vec2> ring, const Rect& rect);

/// Area of the intersection between a polygon with holes (first ring is the
/// shell) and a rectangle.
double intersection_area(std::span<const Ring> rings, const Rect& rect);

}  // namespace recon
