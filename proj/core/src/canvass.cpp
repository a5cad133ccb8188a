#include "recon/canvass.hpp"

#include <cmath>

#include <fmt/format.h>

#include "recon/errors.hpp"
#include "recon/tour.hpp"

namespace recon {

bool is_intersection(const RoadNetwork& network, NodeId node, bool include_degree2) {
  return network.degree(node) >= (include_degree2 ? 2U : 3U);
}

std::vector<NodeId> intersections_in_area(const RoadNetwork& network, const Ring& polygon,
                                          bool include_degree2) {
  std::vector<NodeId> out;
  for (const auto& n : network.nodes()) {
    if (is_intersection(network, n.id, include_degree2) && strictly_inside(n.xy, polygon)) {
      out.push_back(n.id);
    }
  }
  return out;
}

CanvassProblem make_canvass_problem(const RoadNetwork& network, const Ring& polygon,
                                    NodeId entry_node, NodeId exit_node, bool include_degree2) {
  if (entry_node >= network.node_count() || exit_node >= network.node_count()) {
    throw ValidationError("sync node does not exist");
  }
  return {polygon, entry_node, exit_node, intersections_in_area(network, polygon, include_degree2)};
}

Route solve_canvass(const CanvassProblem& problem, const RoutableGraph& graph,
                    const SolverConfig& config, ArcId arrive_arc, ArcId depart_arc) {
  if (problem.intersections.empty()) throw ValidationError("canvass area has no intersections");
  const TurnModel& turn = config.turn;

  // Matrix indices: 0 entry, 1..n interior intersections, n+1 exit.
  std::vector<NodeId> nodes{problem.entry_node};
  for (const NodeId v : problem.intersections) {
    if (v != problem.entry_node && v != problem.exit_node) nodes.push_back(v);
  }
  nodes.push_back(problem.exit_node);
  const std::size_t dim = nodes.size();

  std::vector<ShortestPathTree> trees;
  trees.reserve(dim);
  for (const NodeId v : nodes) trees.emplace_back(graph, turn, v);

  std::vector<NodeId> unreachable;
  for (std::size_t i = 1; i + 1 < dim; ++i) {
    if (trees[0].time_to(nodes[i]) == kInfeasible || trees[i].time_to(nodes.back()) == kInfeasible) {
      unreachable.push_back(nodes[i]);
    }
  }
  if (!unreachable.empty()) {
    throw UnreachableError(fmt::format("unreachable intersections: {}", fmt::join(unreachable, ", ")));
  }
  if (trees[0].time_to(nodes.back()) == kInfeasible) {
    throw UnreachableError(fmt::format("exit {} unreachable from entry {}", problem.exit_node,
                                       problem.entry_node));
  }

  TimeMatrix m(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i != j) m(i, j) = trees[i].time_to(nodes[j]);
    }
  }
  std::vector<std::size_t> interior;
  for (std::size_t i = 1; i + 1 < dim; ++i) interior.push_back(i);
  auto seq = nearest_neighbor_order(m, 0, interior, dim - 1);
  improve_order(m, seq, config.move_limit);

  std::vector<NodeId> walk;
  for (const std::size_t x : seq) walk.push_back(nodes[x]);
  std::vector<std::size_t> positions;
  auto arcs = expand_stops(graph, turn, walk, arrive_arc, depart_arc, &positions);
  std::vector<Waypoint> wps;
  for (std::size_t k = 0; k < walk.size(); ++k) {
    const bool end = k == 0 || k + 1 == walk.size();
    wps.push_back({positions[k], walk[k], end ? WaypointKind::SYNC : WaypointKind::INTERSECTION,
                   fmt::format("node:{}", walk[k])});
  }
  return Route::make(graph, turn, problem.entry_node, std::move(arcs), std::move(wps));
}

}  // namespace recon
