#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "recon/network.hpp"

namespace recon::testkit {

inline constexpr int kGridSize = 20;  // blocks per side
inline constexpr double kOriginLon = -122.35;
inline constexpr double kOriginLat = 47.60;
inline constexpr double kStepLon = 0.0015;
inline constexpr double kStepLat = 0.001;

struct GridCityOptions {
  std::uint64_t seed = 7;
  int asset_count = 300;
  /// Two-edge dead ends running east off the grid's east edge, each with
  /// one asset just past its tip (outside every street buffer).
  int spur_count = 0;
};

/// Synthetic city: a 20x20 block grid (441 nodes, 840 two-way edges, every
/// fifth street primary), assets spread along streets, and 25 block groups
/// of 4x4 blocks whose income band follows the block-group row.
struct GridCityText {
  std::string network_geojson;
  std::string assets_csv;
  std::string blockgroups_geojson;
};

GridCityText make_grid_city_text(const GridCityOptions& options = {});

struct GridCity {
  std::shared_ptr<const RoadNetwork> network;
  std::vector<Asset> assets;
  std::vector<BlockGroup> groups;
};

/// Parses the generated text through the ingest path.
GridCity make_grid_city(const GridCityOptions& options = {});

GeoPoint grid_point(double i, double j);
NodeId grid_node(const RoadNetwork& network, int i, int j);
/// Tip node of spur `k` when built with spurs.
NodeId spur_tip(const RoadNetwork& network, int k);
/// Grid node the spur hangs from.
std::pair<int, int> spur_base(int k);

/// Portable uniform double in [0, 1) from a 64-bit engine.
double unit(std::uint64_t bits);

}  // namespace recon::testkit
