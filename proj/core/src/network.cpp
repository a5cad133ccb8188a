#include "recon/network.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

constexpr std::array<std::string_view, kRoadClassCount> kRoadClassNames = {
    "motorway", "primary", "secondary", "residential", "service"};

constexpr std::array<std::string_view, kCapitalCount> kCapitalNames = {
    "social", "cultural", "built", "economic", "public_health"};

constexpr double kEndpointToleranceM = 1.0;

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::string_view to_string(RoadClass rc) { return kRoadClassNames[static_cast<std::size_t>(rc)]; }

std::optional<RoadClass> parse_road_class(std::string_view s) {
  for (std::size_t i = 0; i < kRoadClassNames.size(); ++i) {
    if (kRoadClassNames[i] == s) return static_cast<RoadClass>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Capital c) { return kCapitalNames[static_cast<std::size_t>(c)]; }

std::optional<Capital> parse_capital(std::string_view s) {
  for (std::size_t i = 0; i < kCapitalNames.size(); ++i) {
    if (kCapitalNames[i] == s) return static_cast<Capital>(i);
  }
  return std::nullopt;
}

NodeId RoadNetwork::nearest_node(Vec2 p) const {
  NodeId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes_) {
    const double d = distance(p, n.xy);
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

NetworkBuilder::NetworkBuilder(Projection projection) { network_.projection_ = projection; }

NodeId NetworkBuilder::add_node(GeoPoint location) {
  const auto id = static_cast<NodeId>(network_.nodes_.size());
  network_.nodes_.push_back({id, location, network_.projection_.forward(location)});
  return id;
}

NodeId NetworkBuilder::add_node_xy(Vec2 xy) {
  return add_node(network_.projection_.inverse(xy));
}

EdgeId NetworkBuilder::add_edge(NodeId from, NodeId to, RoadClass road_class, bool oneway,
                                std::vector<GeoPoint> polyline, std::string feature_id) {
  const auto id = static_cast<EdgeId>(network_.edges_.size());
  if (feature_id.empty()) feature_id = std::to_string(id);
  const auto& nodes = network_.nodes_;
  if (from >= nodes.size() || to >= nodes.size()) {
    throw ValidationError(fmt::format("feature {}: dangling edge endpoint", feature_id));
  }
  if (polyline.empty()) polyline = {nodes[from].location, nodes[to].location};
  if (polyline.size() < 2) {
    throw ValidationError(fmt::format("feature {}: dangling edge endpoint", feature_id));
  }

  Edge e;
  e.id = id;
  e.feature_id = std::move(feature_id);
  e.from = from;
  e.to = to;
  e.shape = network_.projection_.forward(polyline);
  e.polyline = std::move(polyline);
  e.length_m = polyline_length(e.shape);
  e.road_class = road_class;
  e.oneway = oneway;

  if (distance(e.shape.front(), nodes[from].xy) > kEndpointToleranceM ||
      distance(e.shape.back(), nodes[to].xy) > kEndpointToleranceM) {
    throw ValidationError(
        fmt::format("feature {}: polyline endpoints do not meet their nodes", e.feature_id));
  }
  if (!(e.length_m > 0.0)) {
    throw ValidationError(fmt::format("feature {}: zero-length edge", e.feature_id));
  }
  network_.edges_.push_back(std::move(e));
  return id;
}

RoadNetwork NetworkBuilder::build() && {
  auto& net = network_;
  if (net.edges_.empty()) throw ValidationError("no edges");

  net.incident_.assign(net.nodes_.size(), {});
  DisjointSet dsu(net.nodes_.size());
  for (const auto& e : net.edges_) {
    net.incident_[e.from].push_back(e.id);
    if (e.to != e.from) net.incident_[e.to].push_back(e.id);
    dsu.unite(e.from, e.to);
  }
  std::size_t components = 0;
  for (std::size_t i = 0; i < net.nodes_.size(); ++i) {
    if (dsu.find(i) == i) ++components;
  }
  net.component_count_ = components;

  Rect b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  auto grow = [&b](Vec2 p) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  };
  for (const auto& n : net.nodes_) grow(n.xy);
  for (const auto& e : net.edges_) {
    for (const Vec2 p : e.shape) grow(p);
  }
  net.bounds_ = b;
  return std::move(net);
}

}  // namespace recon
