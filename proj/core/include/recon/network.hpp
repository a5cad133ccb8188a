#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recon/geo.hpp"

namespace recon {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class RoadClass : std::uint8_t { motorway, primary, secondary, residential, service };
inline constexpr std::size_t kRoadClassCount = 5;

std::string_view to_string(RoadClass rc);
std::optional<RoadClass> parse_road_class(std::string_view s);

struct Node {
  NodeId id = 0;
  GeoPoint location;
  Vec2 xy;
};

struct Edge {
  EdgeId id = 0;
  std::string feature_id;
  NodeId from = 0;
  NodeId to = 0;
  std::vector<GeoPoint> polyline;
  std::vector<Vec2> shape;  // projected polyline
  double length_m = 0.0;
  RoadClass road_class = RoadClass::residential;
  bool oneway = false;
};

/// Validated road network. Immutable once built.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  [[nodiscard]] const Projection& projection() const { return projection_; }
  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
  [[nodiscard]] const Edge& edge(EdgeId id) const { return edges_.at(id); }
  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

  /// Distinct edges touching the node, ascending.
  [[nodiscard]] const std::vector<EdgeId>& incident_edges(NodeId id) const {
    return incident_.at(id);
  }
  [[nodiscard]] std::size_t degree(NodeId id) const { return incident_.at(id).size(); }

  /// Weakly connected components (edges treated as undirected).
  [[nodiscard]] std::size_t component_count() const { return component_count_; }
  [[nodiscard]] Rect bounds() const { return bounds_; }

  /// Nearest node by planar distance; ties to the smallest id.
  [[nodiscard]] NodeId nearest_node(Vec2 p) const;

 private:
  friend class NetworkBuilder;

  Projection projection_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::size_t component_count_ = 0;
  Rect bounds_;
};

/// Assembles and validates a RoadNetwork. Used by the GeoJSON loader and by
/// code that synthesizes networks directly.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(Projection projection);

  NodeId add_node(GeoPoint location);
  NodeId add_node_xy(Vec2 xy);

  /// `polyline` must start and end within 1 m of the endpoint nodes; when
  /// empty, a straight segment between the nodes is used.
  EdgeId add_edge(NodeId from, NodeId to, RoadClass road_class, bool oneway,
                  std::vector<GeoPoint> polyline = {}, std::string feature_id = {});

  [[nodiscard]] const Projection& projection() const { return network_.projection_; }
  [[nodiscard]] std::size_t node_count() const { return network_.nodes_.size(); }

  /// Throws ValidationError when the network has no edges.
  RoadNetwork build() &&;

 private:
  RoadNetwork network_;
};

enum class Capital : std::uint8_t { social, cultural, built, economic, public_health };
inline constexpr std::size_t kCapitalCount = 5;
inline constexpr Capital kAllCapitals[] = {Capital::social, Capital::cultural, Capital::built,
                                           Capital::economic, Capital::public_health};

std::string_view to_string(Capital c);
std::optional<Capital> parse_capital(std::string_view s);

/// One community-capital component with a point location.
struct Asset {
  std::string asset_id;
  Capital capital = Capital::social;
  std::string component_type;
  GeoPoint location;
  std::string source;
  bool excluded = false;

  friend bool operator==(const Asset&, const Asset&) = default;
};

/// Census block group with its (possibly missing) median household income.
struct BlockGroup {
  std::string bg_id;
  std::vector<GeoRing> polygon;  // shell first, then holes
  std::optional<double> median_income;
  std::optional<int> cluster_label;
};

}  // namespace recon
