#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recon/network.hpp"

namespace recon {

enum class NetworkFormat { geojson_lines };
enum class AssetFormat { csv, geojson_points };

/// Nodes closer than this are merged while loading.
inline constexpr double kNodeSnapToleranceM = 0.5;

/// Exact CSV header for asset files.
inline constexpr std::string_view kAssetCsvHeader = "asset_id,capital,component_type,lon,lat,source";

std::string read_file(const std::filesystem::path& path);

/// GeoJSON FeatureCollection of LineString features carrying `road_class`
/// and optional `oneway` properties. The projection origin defaults to the
/// centre of the coordinate bounding box.
RoadNetwork parse_road_network(std::string_view geojson,
                               std::optional<GeoPoint> origin = std::nullopt);
RoadNetwork load_road_network(const std::filesystem::path& path,
                              NetworkFormat format = NetworkFormat::geojson_lines);

std::vector<Asset> parse_assets_csv(std::string_view csv);
std::vector<Asset> parse_assets_geojson(std::string_view geojson);
std::vector<Asset> load_assets(const std::filesystem::path& path, AssetFormat format);

std::vector<BlockGroup> parse_block_groups(std::string_view geojson);
std::vector<BlockGroup> load_block_groups(const std::filesystem::path& path);

/// Records whose income is missing. They are kept but never classified.
std::size_t count_null_income(std::span<const BlockGroup> groups);

std::string write_road_network_geojson(const RoadNetwork& network);
std::string write_assets_csv(std::span<const Asset> assets);
std::string write_block_groups_geojson(std::span<const BlockGroup> groups);

}  // namespace recon
