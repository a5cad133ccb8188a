#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "recon/network.hpp"
#include "recon/route.hpp"

namespace recon {

struct AssetAssociation {
  std::string asset_id;
  EdgeId nearest_edge = 0;
  double distance_m = 0.0;
  Vec2 projected_point;
  bool within_buffer = false;
};

/// Uniform grid over edge segments. Query results equal a brute-force scan
/// over every edge.
class EdgeIndex {
 public:
  explicit EdgeIndex(const RoadNetwork& network, double cell_m = 100.0);

  struct Hit {
    EdgeId edge = 0;
    PolylineProjection projection;
  };

  /// Nearest edge; ties go to the smallest edge id.
  [[nodiscard]] Hit nearest(Vec2 p) const;
  /// Every edge whose centreline lies within `radius` (inclusive), ascending.
  [[nodiscard]] std::vector<EdgeId> within(Vec2 p, double radius) const;

 private:
  void candidates(Vec2 p, double radius, std::vector<EdgeId>& out) const;

  const RoadNetwork* network_;
  double cell_m_;
  Rect grid_;
  long long nx_ = 1;
  long long ny_ = 1;
  std::vector<std::vector<EdgeId>> cells_;
};

/// One association per non-excluded asset, against every network edge.
std::vector<AssetAssociation> associate_assets(std::span<const Asset> assets,
                                               const RoadNetwork& network, double buffer_m);

/// Precomputed "which assets lie within the buffer of each edge" table.
/// Excluded assets never appear.
class AssetCoverage {
 public:
  AssetCoverage(const RoadNetwork& network, std::span<const Asset> assets, double buffer_m);

  [[nodiscard]] std::span<const std::uint32_t> near_edge(EdgeId e) const { return by_edge_[e]; }
  [[nodiscard]] std::size_t asset_count() const { return asset_count_; }
  [[nodiscard]] double buffer_m() const { return buffer_m_; }

  /// Indices (into the asset list) covered by any edge the arcs traverse.
  [[nodiscard]] std::vector<std::uint32_t> covered(const RoutableGraph& graph,
                                                   std::span<const ArcId> arcs) const;

 private:
  std::size_t asset_count_;
  double buffer_m_;
  std::vector<std::vector<std::uint32_t>> by_edge_;
};

/// Asset ids whose distance to some base edge traversed by the route is at
/// most `buffer_m`. Excluded assets are skipped.
std::set<std::string> route_coverage(const Route& route, const RoutableGraph& graph,
                                     std::span<const Asset> assets, double buffer_m);

}  // namespace recon
