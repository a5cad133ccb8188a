#include "recon/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "recon/errors.hpp"

namespace recon {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed JSON: {}", e.what()));
  }
}

const json& features_of(const json& doc) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("expected a GeoJSON FeatureCollection");
  }
  return doc["features"];
}

std::string feature_name(const json& feature, std::size_t index) {
  if (feature.contains("id")) {
    const auto& id = feature["id"];
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number_integer()) return std::to_string(id.get<long long>());
  }
  if (feature.contains("properties") && feature["properties"].is_object()) {
    const auto& props = feature["properties"];
    if (props.contains("id") && props["id"].is_string()) return props["id"].get<std::string>();
  }
  return fmt::format("#{}", index);
}

const json& properties_of(const json& feature) {
  static const json kEmpty = json::object();
  if (feature.contains("properties") && feature["properties"].is_object()) {
    return feature["properties"];
  }
  return kEmpty;
}

GeoPoint parse_position(const json& pos, const std::string& where) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw ParseError(fmt::format("feature {}: malformed position", where));
  }
  const GeoPoint p{pos[0].get<double>(), pos[1].get<double>()};
  if (!(p.lon >= -180.0 && p.lon <= 180.0 && p.lat >= -90.0 && p.lat <= 90.0)) {
    throw ValidationError(fmt::format("feature {}: coordinate out of WGS84 range", where));
  }
  return p;
}

const json& geometry_of(const json& feature, std::string_view type, const std::string& where) {
  if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object()) {
    throw ParseError(fmt::format("feature {}: missing geometry", where));
  }
  const auto& geom = feature["geometry"];
  if (geom.value("type", "") != type || !geom.contains("coordinates") ||
      !geom["coordinates"].is_array()) {
    throw ParseError(fmt::format("feature {}: expected {} geometry", where, type));
  }
  return geom["coordinates"];
}

GeoPoint bbox_centre(const std::vector<std::vector<GeoPoint>>& lines) {
  double min_lon = std::numeric_limits<double>::infinity();
  double min_lat = min_lon;
  double max_lon = -min_lon;
  double max_lat = -min_lon;
  for (const auto& line : lines) {
    for (const auto& p : line) {
      min_lon = std::min(min_lon, p.lon);
      max_lon = std::max(max_lon, p.lon);
      min_lat = std::min(min_lat, p.lat);
      max_lat = std::max(max_lat, p.lat);
    }
  }
  return {0.5 * (min_lon + max_lon), 0.5 * (min_lat + max_lat)};
}

/// Grid hash that merges points closer than the snap tolerance.
class NodeSnapper {
 public:
  explicit NodeSnapper(NetworkBuilder& builder) : builder_(builder) {}

  NodeId snap(GeoPoint p) {
    const Vec2 xy = builder_.projection().forward(p);
    const auto cx = cell(xy.x);
    const auto cy = cell(xy.y);
    std::optional<NodeId> best;
    double best_d = kNodeSnapToleranceM;
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (const auto& [id, q] : it->second) {
          const double d = distance(xy, q);
          if (d < best_d || (best && d == best_d && id < *best)) {
            best_d = d;
            best = id;
          }
        }
      }
    }
    if (best) return *best;
    const NodeId id = builder_.add_node(p);
    cells_[{cx, cy}].push_back({id, xy});
    return id;
  }

 private:
  static long long cell(double v) {
    return static_cast<long long>(std::floor(v / kNodeSnapToleranceM));
  }

  NetworkBuilder& builder_;
  std::map<std::pair<long long, long long>, std::vector<std::pair<NodeId, Vec2>>> cells_;
};

std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError(fmt::format("row {}: unterminated quoted field", row));
  fields.push_back(std::move(cur));
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void validate_asset_list(const std::vector<Asset>& assets, const std::vector<std::size_t>& rows,
                         std::vector<std::string>& problems) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (!seen.insert(assets[i].asset_id).second) {
      problems.push_back(
          fmt::format("row {}: duplicate asset_id '{}'", rows[i], assets[i].asset_id));
    }
  }
}

[[noreturn]] void throw_problems(std::string_view what, const std::vector<std::string>& problems) {
  throw ValidationError(fmt::format("{}: {}", what, fmt::join(problems, "; ")));
}

json position_json(GeoPoint p) { return json::array({p.lon, p.lat}); }

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RoadNetwork parse_road_network(std::string_view geojson, std::optional<GeoPoint> origin) {
  const json doc = parse_json(geojson);
  const json& features = features_of(doc);

  struct Pending {
    std::string name;
    std::vector<GeoPoint> line;
    RoadClass road_class;
    bool oneway;
    std::optional<double> stated_length;
  };
  std::vector<Pending> pending;
  pending.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    Pending p;
    p.name = f.is_object() ? feature_name(f, i) : fmt::format("#{}", i);
    const json& coords = geometry_of(f, "LineString", p.name);
    for (const auto& pos : coords) p.line.push_back(parse_position(pos, p.name));
    if (p.line.size() < 2) {
      throw ValidationError(fmt::format("feature {}: dangling edge endpoint", p.name));
    }
    const json& props = properties_of(f);
    if (!props.contains("road_class") || !props["road_class"].is_string()) {
      throw ValidationError(fmt::format("feature {}: missing road_class", p.name));
    }
    const auto rc = parse_road_class(props["road_class"].get<std::string>());
    if (!rc) {
      throw ValidationError(fmt::format("feature {}: unknown road_class '{}'", p.name,
                                        props["road_class"].get<std::string>()));
    }
    p.road_class = *rc;
    p.oneway = false;
    if (props.contains("oneway") && !props["oneway"].is_null()) {
      if (!props["oneway"].is_boolean()) {
        throw ValidationError(fmt::format("feature {}: oneway must be boolean", p.name));
      }
      p.oneway = props["oneway"].get<bool>();
    }
    if (props.contains("length_m") && props["length_m"].is_number()) {
      p.stated_length = props["length_m"].get<double>();
    }
    pending.push_back(std::move(p));
  }
  if (pending.empty()) throw ValidationError("no edges");

  if (!origin) {
    std::vector<std::vector<GeoPoint>> lines;
    lines.reserve(pending.size());
    for (const auto& p : pending) lines.push_back(p.line);
    origin = bbox_centre(lines);
  }

  NetworkBuilder builder{Projection(*origin)};
  NodeSnapper snapper(builder);
  for (auto& p : pending) {
    const NodeId from = snapper.snap(p.line.front());
    const NodeId to = snapper.snap(p.line.back());
    const EdgeId id = builder.add_edge(from, to, p.road_class, p.oneway, p.line, p.name);
    (void)id;
    if (p.stated_length) {
      const double computed = polyline_length(builder.projection().forward(p.line));
      if (std::abs(computed - *p.stated_length) > 0.005 * *p.stated_length) {
        throw ValidationError(fmt::format(
            "feature {}: length_m {} disagrees with geometry ({:.3f} m)", p.name,
            *p.stated_length, computed));
      }
    }
  }
  return std::move(builder).build();
}

RoadNetwork load_road_network(const std::filesystem::path& path, NetworkFormat) {
  return parse_road_network(read_file(path));
}

std::vector<Asset> parse_assets_csv(std::string_view csv) {
  std::vector<Asset> assets;
  std::vector<std::size_t> rows;
  std::vector<std::string> problems;

  std::size_t row = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t nl = csv.find('\n', pos);
    std::string_view line =
        csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? csv.size() + 1 : nl + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
      if (line != kAssetCsvHeader) {
        throw ParseError(fmt::format("row 1: expected header '{}'", kAssetCsvHeader));
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, row);
    if (fields.size() != 6) {
      throw ParseError(fmt::format("row {}: expected 6 fields, found {}", row, fields.size()));
    }
    Asset a;
    a.asset_id = fields[0];
    a.component_type = fields[2];
    a.source = fields[5];
    const auto cap = parse_capital(fields[1]);
    const auto lon = parse_double(fields[3]);
    const auto lat = parse_double(fields[4]);
    if (!lon || !lat) throw ParseError(fmt::format("row {}: non-numeric coordinate", row));
    if (a.asset_id.empty()) problems.push_back(fmt::format("row {}: empty asset_id", row));
    if (!cap) {
      problems.push_back(fmt::format("row {}: unknown capital '{}'", row, fields[1]));
    } else {
      a.capital = *cap;
    }
    if (a.component_type.empty()) {
      problems.push_back(fmt::format("row {}: empty component_type", row));
    }
    a.location = {*lon, *lat};
    if (!(*lon >= -180.0 && *lon <= 180.0 && *lat >= -90.0 && *lat <= 90.0)) {
      problems.push_back(fmt::format("row {}: coordinate out of WGS84 range", row));
    }
    assets.push_back(std::move(a));
    rows.push_back(row);
  }
  if (!header_seen) throw ParseError("empty asset file");
  validate_asset_list(assets, rows, problems);
  if (!problems.empty()) throw_problems("invalid asset rows", problems);
  return assets;
}

std::vector<Asset> parse_assets_geojson(std::string_view geojson) {
  const json doc = parse_json(geojson);
  const json& features = features_of(doc);
  std::vector<Asset> assets;
  std::vector<std::size_t> rows;
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    const std::string name = f.is_object() ? feature_name(f, i) : fmt::format("#{}", i);
    const GeoPoint p = parse_position(geometry_of(f, "Point", name), name);
    const json& props = properties_of(f);
    Asset a;
    a.asset_id = props.contains("asset_id") && props["asset_id"].is_string()
                     ? props["asset_id"].get<std::string>()
                     : name;
    a.location = p;
    a.component_type = props.value("component_type", "");
    a.source = props.value("source", "");
    a.excluded = props.value("excluded", false);
    const std::string cap_name = props.value("capital", "");
    const std::size_t row = i + 1;
    if (const auto cap = parse_capital(cap_name)) {
      a.capital = *cap;
    } else {
      problems.push_back(fmt::format("row {}: unknown capital '{}'", row, cap_name));
    }
    if (a.component_type.empty()) {
      problems.push_back(fmt::format("row {}: empty component_type", row));
    }
    assets.push_back(std::move(a));
    rows.push_back(row);
  }
  validate_asset_list(assets, rows, problems);
  if (!problems.empty()) throw_problems("invalid asset features", problems);
  return assets;
}

std::vector<Asset> load_assets(const std::filesystem::path& path, AssetFormat format) {
  const std::string text = read_file(path);
  return format == AssetFormat::csv ? parse_assets_csv(text) : parse_assets_geojson(text);
}

std::vector<BlockGroup> parse_block_groups(std::string_view geojson) {
  const json doc = parse_json(geojson);
  const json& features = features_of(doc);
  std::vector<BlockGroup> groups;
  groups.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    const std::string name = f.is_object() ? feature_name(f, i) : fmt::format("#{}", i);
    const json& rings = geometry_of(f, "Polygon", name);
    BlockGroup bg;
    const json& props = properties_of(f);
    if (props.contains("bg_id") && props["bg_id"].is_string()) {
      bg.bg_id = props["bg_id"].get<std::string>();
    } else if (props.contains("GEOID") && props["GEOID"].is_string()) {
      bg.bg_id = props["GEOID"].get<std::string>();
    } else {
      bg.bg_id = name;
    }
    for (const auto& ring : rings) {
      if (!ring.is_array() || ring.size() < 3) {
        throw ParseError(fmt::format("feature {}: polygon ring needs at least 3 positions", name));
      }
      GeoRing r;
      for (const auto& pos : ring) r.push_back(parse_position(pos, name));
      if (!(r.front() == r.back())) r.push_back(r.front());
      bg.polygon.push_back(std::move(r));
    }
    if (bg.polygon.empty()) throw ParseError(fmt::format("feature {}: empty polygon", name));
    if (props.contains("median_income") && !props["median_income"].is_null()) {
      if (!props["median_income"].is_number()) {
        throw ParseError(fmt::format("feature {}: median_income must be numeric", name));
      }
      const double income = props["median_income"].get<double>();
      if (income < 0.0) {
        throw ValidationError(fmt::format("feature {}: negative median_income", name));
      }
      bg.median_income = income;
    }
    if (props.contains("cluster_label") && !props["cluster_label"].is_null()) {
      if (!props["cluster_label"].is_number_integer()) {
        throw ParseError(fmt::format("feature {}: cluster_label must be an integer", name));
      }
      bg.cluster_label = props["cluster_label"].get<int>();
    }
    groups.push_back(std::move(bg));
  }
  return groups;
}

std::vector<BlockGroup> load_block_groups(const std::filesystem::path& path) {
  return parse_block_groups(read_file(path));
}

std::size_t count_null_income(std::span<const BlockGroup> groups) {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.median_income ? 0 : 1;
  return n;
}

std::string write_road_network_geojson(const RoadNetwork& network) {
  json features = json::array();
  for (const auto& e : network.edges()) {
    json coords = json::array();
    for (const auto& p : e.polyline) coords.push_back(position_json(p));
    features.push_back({{"type", "Feature"},
                        {"id", e.feature_id},
                        {"properties",
                         {{"road_class", std::string(to_string(e.road_class))},
                          {"oneway", e.oneway}}},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump() + "\n";
}

std::string write_assets_csv(std::span<const Asset> assets) {
  std::string out(kAssetCsvHeader);
  out.push_back('\n');
  for (const auto& a : assets) {
    out += fmt::format("{},{},{},{},{},{}\n", csv_field(a.asset_id), to_string(a.capital),
                       csv_field(a.component_type), a.location.lon, a.location.lat,
                       csv_field(a.source));
  }
  return out;
}

std::string write_block_groups_geojson(std::span<const BlockGroup> groups) {
  json features = json::array();
  for (const auto& g : groups) {
    json rings = json::array();
    for (const auto& ring : g.polygon) {
      json r = json::array();
      for (const auto& p : ring) r.push_back(position_json(p));
      rings.push_back(std::move(r));
    }
    json props = {{"bg_id", g.bg_id}};
    props["median_income"] = g.median_income ? json(*g.median_income) : json(nullptr);
    if (g.cluster_label) props["cluster_label"] = *g.cluster_label;
    features.push_back({{"type", "Feature"},
                        {"properties", props},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", rings}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump() + "\n";
}

}  // namespace recon
