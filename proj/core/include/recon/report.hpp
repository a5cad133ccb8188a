#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recon/transect.hpp"

namespace recon {

/// Arrival at one waypoint stop (all waypoints sharing a route position).
struct Arrival {
  std::size_t position = 0;
  NodeId node = 0;
  std::vector<std::string> refs;
  double offset_s = 0.0;
  std::string clock;  // HH:MM:SS, hours may pass 24
};

struct CoverageReport {
  double total_time_s = 0.0;
  double total_length_m = 0.0;
  double traffic_multiplier = 1.0;
  CapitalBreakdown by_capital{};
  std::size_t covered_count = 0;
  std::size_t three_point_turn_count = 0;
  std::size_t excluded_asset_count = 0;
  std::vector<Arrival> arrivals;
};

/// Seconds since midnight for "HH:MM" or "HH:MM:SS". Throws ParseError.
double parse_clock(std::string_view text);
std::string format_clock(double seconds);

/// Metrics and arrival timestamps. Every time is scaled by
/// `traffic_multiplier`; coverage uses the planar buffer.
CoverageReport make_report(const Route& route, const RoutableGraph& graph,
                           std::span<const Asset> assets, double buffer_m,
                           double start_clock_s = 0.0, double traffic_multiplier = 1.0);

enum class ExportFormat { gpx, geojson };

/// Throws SerializationError for unknown names.
ExportFormat parse_export_format(std::string_view name);

/// Byte-stable GPX 1.1 or GeoJSON. GPX track points follow the edge shapes;
/// the GeoJSON LineString holds exactly the node sequence.
std::string export_route(const Route& route, const RoutableGraph& graph, ExportFormat format);

/// Strong validator for exported bytes.
std::string content_etag(std::string_view bytes);

}  // namespace recon
