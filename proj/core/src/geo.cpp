#include "recon/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const double t = len2 > 0.0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy)) <= kBoundaryToleranceM;
}

bool on_boundary(Vec2 p, std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(p, ring[i], ring[(i + 1) % n])) return true;
  }
  return false;
}

bool even_odd_inside(Vec2 p, std::span<const Vec2> ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

template <typename Inside, typename Intersect>
Ring clip_half_plane(const Ring& in, Inside inside, Intersect intersect) {
  Ring out;
  if (in.empty()) return out;
  out.reserve(in.size() + 4);
  Vec2 prev = in.back();
  bool prev_in = inside(prev);
  for (const Vec2 cur : in) {
    const bool cur_in = inside(cur);
    if (cur_in) {
      if (!prev_in) out.push_back(intersect(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(intersect(prev, cur));
    }
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

}  // namespace

Ring Rect::ring() const {
  return {{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}, {min_x, min_y}};
}

Projection::Projection(GeoPoint origin)
    : origin_(origin), cos_lat0_(std::cos(origin.lat * kDegToRad)) {}

Vec2 Projection::forward(GeoPoint p) const {
  const double dlon = p.lon - origin_.lon;
  const double dlat = p.lat - origin_.lat;
  if (!(std::abs(dlon) <= kWindowDeg) || !(std::abs(dlat) <= kWindowDeg)) {
    throw RangeError(fmt::format(
        "point ({}, {}) lies outside the 1-degree window around ({}, {})",
        p.lon, p.lat, origin_.lon, origin_.lat));
  }
  return {kEarthRadiusM * dlon * kDegToRad * cos_lat0_,
          kEarthRadiusM * dlat * kDegToRad};
}

GeoPoint Projection::inverse(Vec2 p) const {
  return {origin_.lon + p.x / (kEarthRadiusM * cos_lat0_) / kDegToRad,
          origin_.lat + p.y / kEarthRadiusM / kDegToRad};
}

std::vector<Vec2> Projection::forward(std::span<const GeoPoint> pts) const {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(forward(p));
  return out;
}

Ring Projection::forward_ring(const GeoRing& ring) const { return forward(ring); }

std::vector<Vec2> project(std::span<const GeoPoint> points, GeoPoint origin) {
  return Projection(origin).forward(points);
}

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double polyline_length(std::span<const Vec2> polyline) {
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    total += distance(polyline[i - 1], polyline[i]);
  }
  return total;
}

PolylineProjection point_to_polyline(Vec2 p, std::span<const Vec2> polyline) {
  if (polyline.size() < 2 || polyline_length(polyline) == 0.0) {
    throw GeometryError("degenerate polyline: needs two distinct vertices");
  }
  PolylineProjection best{std::numeric_limits<double>::infinity(), {}, 0};
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2 a = polyline[i];
    const Vec2 b = polyline[i + 1];
    const Vec2 ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    Vec2 foot = a;
    if (len2 > 0.0) {
      const double t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
      foot = a + t * ab;
    }
    const double d = distance(p, foot);
    if (d < best.distance_m) best = {d, foot, i};
  }
  return best;
}

double signed_area(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

bool strictly_inside(Vec2 p, std::span<const Vec2> ring) {
  if (ring.size() < 3 || on_boundary(p, ring)) return false;
  return even_odd_inside(p, ring);
}

bool inside_or_on(Vec2 p, std::span<const Vec2> ring) {
  if (ring.size() < 3) return false;
  return on_boundary(p, ring) || even_odd_inside(p, ring);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) ||
         on_segment(d, a, b);
}

bool polyline_touches_polygon(std::span<const Vec2> polyline,
                              std::span<const Vec2> ring) {
  if (ring.size() < 3) return false;
  for (const Vec2 v : polyline) {
    if (inside_or_on(v, ring)) return true;
  }
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (segments_intersect(polyline[i], polyline[i + 1], ring[j], ring[(j + 1) % n])) {
        return true;
      }
    }
  }
  return false;
}

Ring clip_to_rect(std::span<const Vec2> ring, const Rect& r) {
  Ring poly(ring.begin(), ring.end());
  auto lerp_x = [](Vec2 a, Vec2 b, double x) {
    const double t = (x - a.x) / (b.x - a.x);
    return Vec2{x, a.y + t * (b.y - a.y)};
  };
  auto lerp_y = [](Vec2 a, Vec2 b, double y) {
    const double t = (y - a.y) / (b.y - a.y);
    return Vec2{a.x + t * (b.x - a.x), y};
  };
  poly = clip_half_plane(poly, [&](Vec2 p) { return p.x >= r.min_x; },
                         [&](Vec2 a, Vec2 b) { return lerp_x(a, b, r.min_x); });
  poly = clip_half_plane(poly, [&](Vec2 p) { return p.x <= r.max_x; },
                         [&](Vec2 a, Vec2 b) { return lerp_x(a, b, r.max_x); });
  poly = clip_half_plane(poly, [&](Vec2 p) { return p.y >= r.min_y; },
                         [&](Vec2 a, Vec2 b) { return lerp_y(a, b, r.min_y); });
  poly = clip_half_plane(poly, [&](Vec2 p) { return p.y <= r.max_y; },
                         [&](Vec2 a, Vec2 b) { return lerp_y(a, b, r.max_y); });
  return poly;
}

double intersection_area(std::span<const Ring> rings, const Rect& rect) {
  double area = 0.0;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    const double a = std::abs(signed_area(clip_to_rect(rings[i], rect)));
    area += (i == 0) ? a : -a;
  }
  return std::max(area, 0.0);
}

}  // namespace recon
