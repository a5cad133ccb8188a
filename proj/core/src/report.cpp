#include "recon/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "recon/errors.hpp"

namespace recon {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string coord(GeoPoint p) { return fmt::format("[{:.7f},{:.7f}]", p.lon, p.lat); }

std::string export_gpx(const Route& route, const RoutableGraph& graph) {
  const RoadNetwork& net = graph.network();
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<gpx version=\"1.1\" creator=\"recon-route\" xmlns=\"http://www.topografix.com/GPX/1/1\">\n";
  for (const auto& w : route.waypoints()) {
    const GeoPoint p = net.node(w.node).location;
    out += fmt::format("  <wpt lat=\"{:.7f}\" lon=\"{:.7f}\"><name>{} {}</name></wpt>\n", p.lat,
                       p.lon, to_string(w.kind), xml_escape(w.ref));
  }
  out += "  <trk>\n    <name>route</name>\n    <trkseg>\n";
  const auto point = [&out](GeoPoint p) {
    out += fmt::format("      <trkpt lat=\"{:.7f}\" lon=\"{:.7f}\"/>\n", p.lat, p.lon);
  };
  point(net.node(route.start()).location);
  for (const ArcId id : route.arcs()) {
    const Arc& a = graph.arc(id);
    const auto& line = net.edge(a.edge).polyline;
    const std::size_t n = line.size();
    for (std::size_t k = 1; k + 1 < n; ++k) point(a.forward ? line[k] : line[n - 1 - k]);
    point(net.node(a.head).location);
  }
  out += "    </trkseg>\n  </trk>\n</gpx>\n";
  return out;
}

std::string export_geojson(const Route& route, const RoutableGraph& graph) {
  const RoadNetwork& net = graph.network();
  std::string coords;
  const auto& nodes = route.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k > 0) coords += ',';
    coords += coord(net.node(nodes[k]).location);
  }
  if (nodes.size() == 1) coords += ',' + coord(net.node(nodes[0]).location);
  std::string out = "{\"type\":\"FeatureCollection\",\"features\":[\n";
  out += fmt::format(
      "{{\"type\":\"Feature\",\"geometry\":{{\"type\":\"LineString\",\"coordinates\":[{}]}},"
      "\"properties\":{{\"total_time_s\":{:.3f},\"total_length_m\":{:.3f}}}}}",
      coords, route.total_time_s(), route.total_length_m());
  for (const auto& w : route.waypoints()) {
    out += fmt::format(
        ",\n{{\"type\":\"Feature\",\"geometry\":{{\"type\":\"Point\",\"coordinates\":{}}},"
        "\"properties\":{{\"kind\":\"{}\",\"ref\":{},\"position\":{}}}}}",
        coord(net.node(w.node).location), to_string(w.kind), json_string(w.ref), w.position);
  }
  out += "\n]}\n";
  return out;
}

}  // namespace

double parse_clock(std::string_view text) {
  int h = 0;
  int m = 0;
  int s = 0;
  char tail = 0;
  const std::string t(text);
  const int n = std::sscanf(t.c_str(), "%d:%d:%d%c", &h, &m, &s, &tail);
  if ((n != 2 && n != 3) || h < 0 || m < 0 || m > 59 || s < 0 || s > 59 ||
      (n == 2 && t.find(':') != t.rfind(':'))) {
    throw ParseError(fmt::format("bad clock time '{}', expected HH:MM[:SS]", text));
  }
  return h * 3600.0 + m * 60.0 + s;
}

std::string format_clock(double seconds) {
  const auto total = static_cast<long long>(std::llround(seconds));
  return fmt::format("{:02}:{:02}:{:02}", total / 3600, (total / 60) % 60, total % 60);
}

CoverageReport make_report(const Route& route, const RoutableGraph& graph,
                           std::span<const Asset> assets, double buffer_m, double start_clock_s,
                           double traffic_multiplier) {
  if (!(traffic_multiplier > 0.0)) throw ConfigError("traffic_multiplier must be positive");
  CoverageReport r;
  r.traffic_multiplier = traffic_multiplier;
  r.total_time_s = route.total_time_s() * traffic_multiplier;
  r.total_length_m = route.total_length_m();
  r.by_capital = count_onroute_capitals(route, graph, assets, buffer_m);
  for (const auto& c : r.by_capital) r.covered_count += c.visited + c.opportunistic;
  r.three_point_turn_count = route.maneuvers().size();
  for (const auto& a : assets) r.excluded_asset_count += a.excluded ? 1 : 0;
  for (const auto& w : route.waypoints()) {
    if (r.arrivals.empty() || r.arrivals.back().position != w.position) {
      const double offset = route.arrival_offsets()[w.position] * traffic_multiplier;
      r.arrivals.push_back({w.position, w.node, {}, offset, format_clock(start_clock_s + offset)});
    }
    r.arrivals.back().refs.push_back(w.ref);
  }
  return r;
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "gpx") return ExportFormat::gpx;
  if (name == "geojson") return ExportFormat::geojson;
  throw SerializationError(fmt::format("unknown export format '{}'", name));
}

std::string export_route(const Route& route, const RoutableGraph& graph, ExportFormat format) {
  return format == ExportFormat::gpx ? export_gpx(route, graph) : export_geojson(route, graph);
}

std::string content_etag(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("\"{:016x}\"", h);
}

}  // namespace recon
