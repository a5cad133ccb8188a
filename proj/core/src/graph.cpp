#include "recon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

using QueueEntry = std::pair<double, ArcId>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

std::vector<ArcId> unwind(const std::vector<ArcId>& parent, ArcId last) {
  std::vector<ArcId> arcs;
  for (ArcId a = last; a != kNoArc; a = parent[a]) arcs.push_back(a);
  std::reverse(arcs.begin(), arcs.end());
  return arcs;
}

double length_of(const RoutableGraph& g, const std::vector<ArcId>& arcs) {
  double len = 0.0;
  for (const ArcId a : arcs) len += g.arc(a).length_m;
  return len;
}

void check_node(const RoutableGraph& g, NodeId n) {
  if (n >= g.node_count()) throw NoPathError(fmt::format("node {} does not exist", n));
}

}  // namespace

TurnModel TurnModel::penalty(double seconds) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    throw ConfigError(fmt::format("u_turn_penalty_s must be finite and >= 0 (got {})", seconds));
  }
  return TurnModel(seconds);
}

void SolverConfig::validate() const {
  for (std::size_t i = 0; i < speed_mps.size(); ++i) {
    if (speed_mps[i] && !(*speed_mps[i] > 0.0)) {
      throw ConfigError(fmt::format("speed for {} must be positive",
                                    to_string(static_cast<RoadClass>(i))));
    }
  }
  if (!(traffic_multiplier >= 0.1) || !std::isfinite(traffic_multiplier)) {
    throw ConfigError("traffic_multiplier must be >= 0.1");
  }
  if (!(buffer_m > 0.0)) throw ConfigError("buffer_m must be positive");
  if (!(budget_s > 0.0)) throw ConfigError("budget_s must be positive");
  if (!(seed_grid_cell_m > 0.0)) throw ConfigError("seed_grid_cell_m must be positive");
  if (!(target_cells_fraction > 0.0 && target_cells_fraction <= 1.0)) {
    throw ConfigError("target_cells_fraction must lie in (0, 1]");
  }
}

ArcId RoutableGraph::arc_for(EdgeId edge, bool forward) const {
  if (edge >= by_edge_.size()) return kNoArc;
  return by_edge_[edge][forward ? 0 : 1];
}

bool RoutableGraph::has_edge(EdgeId edge) const {
  return arc_for(edge, true) != kNoArc || arc_for(edge, false) != kNoArc;
}

double RoutableGraph::transition_cost(const RoutableGraph& g, const TurnModel& turn, ArcId from,
                                      ArcId to) {
  if (from == kNoArc || to == kNoArc || g.reverse(from) != to) return 0.0;
  return turn.is_prohibited() ? kInfeasible : turn.penalty_s();
}

RoutableGraph build_graph(std::shared_ptr<const RoadNetwork> network, const SolverConfig& config,
                          std::span<const EdgeId> removed_edges) {
  config.validate();
  RoutableGraph g;
  const auto& net = *network;
  const std::unordered_set<EdgeId> removed(removed_edges.begin(), removed_edges.end());

  g.by_edge_.assign(net.edge_count(), {kNoArc, kNoArc});
  g.out_.assign(net.node_count(), {});
  g.in_.assign(net.node_count(), {});
  g.arcs_.reserve(net.edge_count() * 2);

  for (const auto& e : net.edges()) {
    const auto& speed = config.speed_mps[static_cast<std::size_t>(e.road_class)];
    if (!speed) {
      throw ConfigError(
          fmt::format("no speed configured for road class '{}'", to_string(e.road_class)));
    }
    if (removed.contains(e.id)) continue;
    const double time = e.length_m / *speed * config.traffic_multiplier;
    const auto add = [&](bool forward) {
      Arc a;
      a.id = static_cast<ArcId>(g.arcs_.size());
      a.edge = e.id;
      a.forward = forward;
      a.tail = forward ? e.from : e.to;
      a.head = forward ? e.to : e.from;
      a.travel_time_s = time;
      a.length_m = e.length_m;
      g.by_edge_[e.id][forward ? 0 : 1] = a.id;
      g.arcs_.push_back(a);
    };
    add(true);
    if (!e.oneway) add(false);
  }

  g.reverse_.assign(g.arcs_.size(), kNoArc);
  for (const auto& a : g.arcs_) {
    g.out_[a.tail].push_back(a.id);
    g.in_[a.head].push_back(a.id);
    g.reverse_[a.id] = g.by_edge_[a.edge][a.forward ? 1 : 0];
  }
  g.network_ = std::move(network);
  return g;
}

PathResult shortest_path(const RoutableGraph& graph, const TurnModel& turn, NodeId from, NodeId to) {
  return shortest_path(graph, turn, PathQuery{from, to, kNoArc, kNoArc});
}

PathResult shortest_path(const RoutableGraph& graph, const TurnModel& turn, const PathQuery& q) {
  check_node(graph, q.from);
  check_node(graph, q.to);

  double best = kInfeasible;
  ArcId best_arc = kNoArc;
  bool best_empty = false;
  if (q.from == q.to) {
    best = RoutableGraph::transition_cost(graph, turn, q.prev_arc, q.next_arc);
    best_empty = best < kInfeasible;
    if (best == 0.0) return {};
  }

  std::vector<double> dist(graph.arc_count(), kInfeasible);
  std::vector<ArcId> parent(graph.arc_count(), kNoArc);
  MinQueue queue;
  for (const ArcId b : graph.out_arcs(q.from)) {
    const double t = RoutableGraph::transition_cost(graph, turn, q.prev_arc, b);
    if (t == kInfeasible) continue;
    const double d = t + graph.arc(b).travel_time_s;
    if (d < dist[b]) {
      dist[b] = d;
      queue.emplace(d, b);
    }
  }

  while (!queue.empty()) {
    const auto [d, a] = queue.top();
    queue.pop();
    if (d > dist[a]) continue;
    if (d >= best) break;
    const Arc& arc = graph.arc(a);
    if (arc.head == q.to) {
      const double t = RoutableGraph::transition_cost(graph, turn, a, q.next_arc);
      if (d + t < best) {
        best = d + t;
        best_arc = a;
        best_empty = false;
      }
    }
    for (const ArcId b : graph.out_arcs(arc.head)) {
      const double t = RoutableGraph::transition_cost(graph, turn, a, b);
      if (t == kInfeasible) continue;
      const double nd = d + t + graph.arc(b).travel_time_s;
      if (nd < dist[b]) {
        dist[b] = nd;
        parent[b] = a;
        queue.emplace(nd, b);
      }
    }
  }

  if (best == kInfeasible) {
    throw NoPathError(fmt::format("no admissible path from node {} to node {}", q.from, q.to));
  }
  PathResult r;
  if (!best_empty) r.arcs = unwind(parent, best_arc);
  r.total_time_s = best;
  r.total_length_m = length_of(graph, r.arcs);
  return r;
}

ShortestPathTree::ShortestPathTree(const RoutableGraph& graph, const TurnModel& turn, NodeId source)
    : source_(source),
      arc_time_(graph.arc_count(), kInfeasible),
      parent_(graph.arc_count(), kNoArc),
      best_in_(graph.node_count(), kNoArc) {
  check_node(graph, source);
  MinQueue queue;
  for (const ArcId b : graph.out_arcs(source)) {
    const double d = graph.arc(b).travel_time_s;
    if (d < arc_time_[b]) {
      arc_time_[b] = d;
      queue.emplace(d, b);
    }
  }
  while (!queue.empty()) {
    const auto [d, a] = queue.top();
    queue.pop();
    if (d > arc_time_[a]) continue;
    const NodeId head = graph.arc(a).head;
    // Arcs pop in (time, id) order, so the first arc into a node is its best.
    if (best_in_[head] == kNoArc) best_in_[head] = a;
    for (const ArcId b : graph.out_arcs(head)) {
      const double t = RoutableGraph::transition_cost(graph, turn, a, b);
      if (t == kInfeasible) continue;
      const double nd = d + t + graph.arc(b).travel_time_s;
      if (nd < arc_time_[b]) {
        arc_time_[b] = nd;
        parent_[b] = a;
        queue.emplace(nd, b);
      }
    }
  }
}

double ShortestPathTree::time_to(NodeId node) const {
  if (node == source_) return 0.0;
  const ArcId a = best_in_.at(node);
  return a == kNoArc ? kInfeasible : arc_time_[a];
}

std::vector<ArcId> ShortestPathTree::path_to(NodeId node) const {
  if (node == source_) return {};
  const ArcId a = best_in_.at(node);
  if (a == kNoArc) {
    throw NoPathError(fmt::format("no admissible path from node {} to node {}", source_, node));
  }
  return unwind(parent_, a);
}

TimeMatrix pairwise_matrix(const RoutableGraph& graph, const TurnModel& turn,
                           std::span<const NodeId> waypoints) {
  TimeMatrix m(waypoints.size());
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const ShortestPathTree tree(graph, turn, waypoints[i]);
    for (std::size_t j = 0; j < waypoints.size(); ++j) {
      m(i, j) = (waypoints[i] == waypoints[j]) ? 0.0 : tree.time_to(waypoints[j]);
    }
  }
  return m;
}

}  // namespace recon
