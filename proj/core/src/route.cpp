#include "recon/route.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

constexpr std::array<std::string_view, 5> kWaypointKindNames = {"CAPITAL", "INTERSECTION", "SYNC",
                                                                "DEPOT", "LOCKED"};

}  // namespace

std::string_view to_string(WaypointKind k) { return kWaypointKindNames[static_cast<std::size_t>(k)]; }

std::optional<WaypointKind> parse_waypoint_kind(std::string_view s) {
  for (std::size_t i = 0; i < kWaypointKindNames.size(); ++i) {
    if (kWaypointKindNames[i] == s) return static_cast<WaypointKind>(i);
  }
  return std::nullopt;
}

Route Route::make(const RoutableGraph& graph, const TurnModel& turn, NodeId start,
                  std::vector<ArcId> arcs, std::vector<Waypoint> waypoints) {
  if (start >= graph.node_count()) {
    throw ValidationError(fmt::format("route start node {} does not exist", start));
  }
  Route r;
  r.nodes_.assign(1, start);
  r.offsets_.assign(1, 0.0);
  r.nodes_.reserve(arcs.size() + 1);
  r.offsets_.reserve(arcs.size() + 1);
  double elapsed = 0.0;
  double length = 0.0;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    if (arcs[k] >= graph.arc_count()) {
      throw ValidationError(fmt::format("route arc {} does not exist", arcs[k]));
    }
    const Arc& a = graph.arc(arcs[k]);
    if (a.tail != r.nodes_.back()) {
      throw ValidationError(fmt::format("route broken at arc position {}", k));
    }
    if (k > 0) {
      const double t = RoutableGraph::transition_cost(graph, turn, arcs[k - 1], arcs[k]);
      if (t == kInfeasible) {
        throw ConstraintError(
            fmt::format("route reverses at position {} while U-turns are prohibited", k - 1));
      }
      elapsed += t;
    }
    elapsed += a.travel_time_s;
    length += a.length_m;
    r.nodes_.push_back(a.head);
    r.offsets_.push_back(elapsed);
  }
  for (const auto& w : waypoints) {
    if (w.position >= r.nodes_.size() || r.nodes_[w.position] != w.node) {
      throw ValidationError(
          fmt::format("waypoint {} is not at node {} of the route", w.ref, w.node));
    }
  }
  std::stable_sort(waypoints.begin(), waypoints.end(),
                   [](const Waypoint& a, const Waypoint& b) { return a.position < b.position; });
  r.arcs_ = std::move(arcs);
  r.waypoints_ = std::move(waypoints);
  r.total_time_s_ = elapsed;
  r.total_length_m_ = length;
  r.maneuvers_ = detect_three_point_turns(r, graph);
  return r;
}

std::optional<std::size_t> Route::find_node(NodeId node, std::size_t from) const {
  for (std::size_t i = from; i < nodes_.size(); ++i) {
    if (nodes_[i] == node) return i;
  }
  return std::nullopt;
}

std::vector<Maneuver> detect_three_point_turns(const Route& route, const RoutableGraph& graph) {
  std::vector<Maneuver> out;
  const auto& arcs = route.arcs();
  for (std::size_t k = 0; k + 1 < arcs.size(); ++k) {
    const ArcId rev = graph.reverse(arcs[k]);
    if (rev != kNoArc && arcs[k + 1] == rev) out.push_back({k, ManeuverKind::THREE_POINT_TURN});
  }
  return out;
}

std::vector<ArcId> expand_stops(const RoutableGraph& graph, const TurnModel& turn,
                                const std::vector<NodeId>& stops, ArcId initial_arc,
                                ArcId final_arc, std::vector<std::size_t>* stop_positions) {
  std::vector<ArcId> arcs;
  ArcId prev = initial_arc;
  if (stop_positions) stop_positions->assign(stops.empty() ? 0 : 1, 0);
  for (std::size_t i = 1; i < stops.size(); ++i) {
    const ArcId next = (i + 1 == stops.size()) ? final_arc : kNoArc;
    const PathResult leg = shortest_path(graph, turn, PathQuery{stops[i - 1], stops[i], prev, next});
    arcs.insert(arcs.end(), leg.arcs.begin(), leg.arcs.end());
    if (!leg.arcs.empty()) prev = leg.arcs.back();
    if (stop_positions) stop_positions->push_back(arcs.size());
  }
  return arcs;
}

}  // namespace recon
