#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recon/graph.hpp"

namespace recon {

enum class WaypointKind { CAPITAL, INTERSECTION, SYNC, DEPOT, LOCKED };

std::string_view to_string(WaypointKind k);
std::optional<WaypointKind> parse_waypoint_kind(std::string_view s);

/// A typed stop. `position` indexes the route's node sequence; `ref` names
/// what the stop stands for (asset id, or "node:<id>" for bare nodes).
struct Waypoint {
  std::size_t position = 0;
  NodeId node = 0;
  WaypointKind kind = WaypointKind::CAPITAL;
  std::string ref;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

enum class ManeuverKind { THREE_POINT_TURN };

/// Reversal between arc `position` and arc `position + 1`; the turn happens
/// at node `position + 1` of the node sequence.
struct Maneuver {
  std::size_t position = 0;
  ManeuverKind kind = ManeuverKind::THREE_POINT_TURN;

  friend bool operator==(const Maneuver&, const Maneuver&) = default;
};

/// Ordered directed-arc walk with typed waypoints. Values are immutable in
/// practice; every edit operation returns a new Route.
class Route {
 public:
  Route() = default;

  /// Validates chain connectivity and waypoint positions, prices the walk
  /// (arc times plus a penalty per immediate reversal) and annotates
  /// three-point turns. Throws ValidationError on a broken chain and
  /// ConstraintError when the walk contains a prohibited reversal.
  static Route make(const RoutableGraph& graph, const TurnModel& turn, NodeId start,
                    std::vector<ArcId> arcs, std::vector<Waypoint> waypoints);

  [[nodiscard]] NodeId start() const { return nodes_.front(); }
  [[nodiscard]] NodeId end() const { return nodes_.back(); }
  [[nodiscard]] bool empty() const { return arcs_.empty(); }
  [[nodiscard]] const std::vector<ArcId>& arcs() const { return arcs_; }
  [[nodiscard]] const std::vector<NodeId>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  [[nodiscard]] const std::vector<Maneuver>& maneuvers() const { return maneuvers_; }
  [[nodiscard]] double total_time_s() const { return total_time_s_; }
  [[nodiscard]] double total_length_m() const { return total_length_m_; }

  /// Elapsed time on arrival at each node of the sequence (size = nodes()).
  [[nodiscard]] const std::vector<double>& arrival_offsets() const { return offsets_; }

  /// First position >= `from` holding `node`.
  [[nodiscard]] std::optional<std::size_t> find_node(NodeId node, std::size_t from = 0) const;

  friend bool operator==(const Route&, const Route&) = default;

 private:
  std::vector<ArcId> arcs_;
  std::vector<NodeId> nodes_{0};
  std::vector<Waypoint> waypoints_;
  std::vector<Maneuver> maneuvers_;
  std::vector<double> offsets_{0.0};
  double total_time_s_ = 0.0;
  double total_length_m_ = 0.0;
};

/// One THREE_POINT_TURN per position k where arc k+1 is the reverse twin of
/// arc k.
std::vector<Maneuver> detect_three_point_turns(const Route& route, const RoutableGraph& graph);

/// Expands an ordered stop list into arcs with seam-aware shortest paths:
/// each leg accounts for the arc the previous leg arrived on. `final_arc`,
/// when given, is the arc the walk will continue onto after the last stop.
/// `stop_positions`, when given, receives the node-sequence position of each
/// stop.
std::vector<ArcId> expand_stops(const RoutableGraph& graph, const TurnModel& turn,
                                const std::vector<NodeId>& stops, ArcId initial_arc = kNoArc,
                                ArcId final_arc = kNoArc,
                                std::vector<std::size_t>* stop_positions = nullptr);

}  // namespace recon
