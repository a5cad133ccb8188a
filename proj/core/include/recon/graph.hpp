#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "recon/config.hpp"
#include "recon/network.hpp"

namespace recon {

using ArcId = std::uint32_t;
inline constexpr ArcId kNoArc = std::numeric_limits<ArcId>::max();
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

struct Arc {
  ArcId id = 0;
  EdgeId edge = 0;
  NodeId tail = 0;
  NodeId head = 0;
  bool forward = true;  // traverses the edge polyline in stored order
  double travel_time_s = 0.0;
  double length_m = 0.0;
};

/// Directed, turn-aware expansion of a RoadNetwork. Arcs are ordered by base
/// edge id, forward before backward. Immutable after construction.
class RoutableGraph {
 public:
  [[nodiscard]] const RoadNetwork& network() const { return *network_; }
  [[nodiscard]] const std::shared_ptr<const RoadNetwork>& network_ptr() const { return network_; }

  [[nodiscard]] std::size_t arc_count() const { return arcs_.size(); }
  [[nodiscard]] std::size_t node_count() const { return out_.size(); }
  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
  [[nodiscard]] const Arc& arc(ArcId id) const { return arcs_[id]; }
  [[nodiscard]] std::span<const ArcId> out_arcs(NodeId n) const { return out_[n]; }
  [[nodiscard]] std::span<const ArcId> in_arcs(NodeId n) const { return in_[n]; }

  /// Opposite-direction twin, or kNoArc for oneway arcs.
  [[nodiscard]] ArcId reverse(ArcId id) const { return reverse_[id]; }
  /// Arc traversing `edge` in the given direction, or kNoArc.
  [[nodiscard]] ArcId arc_for(EdgeId edge, bool forward) const;
  [[nodiscard]] bool has_edge(EdgeId edge) const;

  /// Cost of continuing from `from` onto `to` at their shared node: 0, the
  /// U-turn penalty, or kInfeasible when the reversal is prohibited.
  [[nodiscard]] static double transition_cost(const RoutableGraph& g, const TurnModel& turn,
                                              ArcId from, ArcId to);

 private:
  friend RoutableGraph build_graph(std::shared_ptr<const RoadNetwork>, const SolverConfig&,
                                   std::span<const EdgeId>);

  std::shared_ptr<const RoadNetwork> network_;
  std::vector<Arc> arcs_;
  std::vector<ArcId> reverse_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
  std::vector<std::array<ArcId, 2>> by_edge_;
};

/// Throws ConfigError when a road class present in the data has no speed.
/// Edges listed in `removed_edges` produce no arcs.
RoutableGraph build_graph(std::shared_ptr<const RoadNetwork> network, const SolverConfig& config,
                          std::span<const EdgeId> removed_edges = {});

struct PathResult {
  std::vector<ArcId> arcs;
  double total_time_s = 0.0;
  double total_length_m = 0.0;
};

/// A point-to-point query. `prev_arc` is the arc the vehicle arrived on at
/// `from`; `next_arc` is the arc it will leave `to` on. Both are optional and
/// only affect turn costs at the seams.
struct PathQuery {
  NodeId from = 0;
  NodeId to = 0;
  ArcId prev_arc = kNoArc;
  ArcId next_arc = kNoArc;
};

/// Minimum-time path over (arc, head) states, so U-turn costs are exact.
/// Throws NoPathError when no admissible path exists.
PathResult shortest_path(const RoutableGraph& graph, const TurnModel& turn, NodeId from, NodeId to);
PathResult shortest_path(const RoutableGraph& graph, const TurnModel& turn, const PathQuery& query);

/// Single-source search result (no incoming arc at the source).
class ShortestPathTree {
 public:
  ShortestPathTree(const RoutableGraph& graph, const TurnModel& turn, NodeId source);

  [[nodiscard]] NodeId source() const { return source_; }
  /// kInfeasible when unreachable.
  [[nodiscard]] double time_to(NodeId node) const;
  /// Throws NoPathError when unreachable.
  [[nodiscard]] std::vector<ArcId> path_to(NodeId node) const;
  /// Earliest time at the head of `arc` having just driven it; kInfeasible
  /// when no admissible walk ends on that arc.
  [[nodiscard]] double arrival_time(ArcId arc) const { return arc_time_.at(arc); }

 private:
  NodeId source_;
  std::vector<double> arc_time_;
  std::vector<ArcId> parent_;
  std::vector<ArcId> best_in_;  // per node: arc achieving the minimum
};

/// Row-major square matrix of travel times in seconds.
class TimeMatrix {
 public:
  TimeMatrix() = default;
  explicit TimeMatrix(std::size_t n, double fill = 0.0) : n_(n), t_(n * n, fill) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return t_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return t_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> t_;
};

/// Entry (i, j) is shortest_path(i -> j).total_time_s; kInfeasible when no
/// path exists.
TimeMatrix pairwise_matrix(const RoutableGraph& graph, const TurnModel& turn,
                           std::span<const NodeId> waypoints);

}  // namespace recon
