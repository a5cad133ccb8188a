#include "recon/buffer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace recon {

EdgeIndex::EdgeIndex(const RoadNetwork& network, double cell_m)
    : network_(&network), cell_m_(cell_m), grid_(network.bounds()) {
  nx_ = std::max<long long>(1, static_cast<long long>(std::ceil(grid_.width() / cell_m_)));
  ny_ = std::max<long long>(1, static_cast<long long>(std::ceil(grid_.height() / cell_m_)));
  cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
  auto cx = [&](double x) {
    return std::clamp(static_cast<long long>(std::floor((x - grid_.min_x) / cell_m_)), 0LL, nx_ - 1);
  };
  auto cy = [&](double y) {
    return std::clamp(static_cast<long long>(std::floor((y - grid_.min_y) / cell_m_)), 0LL, ny_ - 1);
  };
  for (const auto& e : network.edges()) {
    for (std::size_t i = 0; i + 1 < e.shape.size(); ++i) {
      const Vec2 a = e.shape[i];
      const Vec2 b = e.shape[i + 1];
      for (long long x = cx(std::min(a.x, b.x)); x <= cx(std::max(a.x, b.x)); ++x) {
        for (long long y = cy(std::min(a.y, b.y)); y <= cy(std::max(a.y, b.y)); ++y) {
          auto& cell = cells_[static_cast<std::size_t>(y * nx_ + x)];
          if (cell.empty() || cell.back() != e.id) cell.push_back(e.id);
        }
      }
    }
  }
}

void EdgeIndex::candidates(Vec2 p, double radius, std::vector<EdgeId>& out) const {
  out.clear();
  const double lo_x = p.x - radius;
  const double hi_x = p.x + radius;
  const double lo_y = p.y - radius;
  const double hi_y = p.y + radius;
  if (hi_x < grid_.min_x || lo_x > grid_.max_x || hi_y < grid_.min_y || lo_y > grid_.max_y) return;
  auto clamp_x = [&](double x) {
    return std::clamp(static_cast<long long>(std::floor((x - grid_.min_x) / cell_m_)), 0LL, nx_ - 1);
  };
  auto clamp_y = [&](double y) {
    return std::clamp(static_cast<long long>(std::floor((y - grid_.min_y) / cell_m_)), 0LL, ny_ - 1);
  };
  for (long long y = clamp_y(lo_y); y <= clamp_y(hi_y); ++y) {
    for (long long x = clamp_x(lo_x); x <= clamp_x(hi_x); ++x) {
      const auto& cell = cells_[static_cast<std::size_t>(y * nx_ + x)];
      out.insert(out.end(), cell.begin(), cell.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

EdgeIndex::Hit EdgeIndex::nearest(Vec2 p) const {
  const auto& edges = network_->edges();
  const double span = std::hypot(grid_.width(), grid_.height());
  const double outside =
      std::hypot(std::max({grid_.min_x - p.x, 0.0, p.x - grid_.max_x}),
                 std::max({grid_.min_y - p.y, 0.0, p.y - grid_.max_y}));
  std::vector<EdgeId> cand;
  for (double radius = std::max(cell_m_, outside);; radius *= 2.0) {
    candidates(p, radius, cand);
    Hit best{0, {std::numeric_limits<double>::infinity(), {}, 0}};
    for (const EdgeId id : cand) {
      const auto proj = point_to_polyline(p, edges[id].shape);
      if (proj.distance_m < best.projection.distance_m) best = {id, proj};
    }
    // Every edge within `radius` is a candidate, so a hit inside the radius
    // is the global minimum (ties included).
    if (best.projection.distance_m <= radius) return best;
    if (radius > span + outside + cell_m_) {
      for (const auto& e : edges) {
        const auto proj = point_to_polyline(p, e.shape);
        if (proj.distance_m < best.projection.distance_m) best = {e.id, proj};
      }
      return best;
    }
  }
}

std::vector<EdgeId> EdgeIndex::within(Vec2 p, double radius) const {
  std::vector<EdgeId> cand;
  candidates(p, radius, cand);
  std::vector<EdgeId> out;
  for (const EdgeId id : cand) {
    if (point_to_polyline(p, network_->edge(id).shape).distance_m <= radius) out.push_back(id);
  }
  return out;
}

std::vector<AssetAssociation> associate_assets(std::span<const Asset> assets,
                                               const RoadNetwork& network, double buffer_m) {
  const EdgeIndex index(network, std::max(buffer_m, 50.0));
  std::vector<AssetAssociation> out;
  out.reserve(assets.size());
  for (const auto& a : assets) {
    if (a.excluded) continue;
    const Vec2 p = network.projection().forward(a.location);
    const auto hit = index.nearest(p);
    out.push_back({a.asset_id, hit.edge, hit.projection.distance_m, hit.projection.point,
                   hit.projection.distance_m <= buffer_m});
  }
  return out;
}

AssetCoverage::AssetCoverage(const RoadNetwork& network, std::span<const Asset> assets,
                             double buffer_m)
    : asset_count_(assets.size()), buffer_m_(buffer_m), by_edge_(network.edge_count()) {
  const EdgeIndex index(network, std::max(buffer_m, 50.0));
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (assets[i].excluded) continue;
    const Vec2 p = network.projection().forward(assets[i].location);
    for (const EdgeId e : index.within(p, buffer_m)) {
      by_edge_[e].push_back(static_cast<std::uint32_t>(i));
    }
  }
}

std::vector<std::uint32_t> AssetCoverage::covered(const RoutableGraph& graph,
                                                  std::span<const ArcId> arcs) const {
  std::vector<char> seen_edge(by_edge_.size(), 0);
  std::vector<char> hit(asset_count_, 0);
  for (const ArcId a : arcs) {
    const EdgeId e = graph.arc(a).edge;
    if (seen_edge[e]) continue;
    seen_edge[e] = 1;
    for (const auto i : by_edge_[e]) hit[i] = 1;
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::set<std::string> route_coverage(const Route& route, const RoutableGraph& graph,
                                     std::span<const Asset> assets, double buffer_m) {
  std::set<std::string> out;
  if (assets.empty() || route.empty()) return out;
  const AssetCoverage cov(graph.network(), assets, buffer_m);
  for (const auto i : cov.covered(graph, route.arcs())) out.insert(assets[i].asset_id);
  return out;
}

}  // namespace recon
