#pragma once

#include <vector>

#include "recon/config.hpp"
#include "recon/graph.hpp"
#include "recon/route.hpp"

namespace recon {

/// Three or more distinct incident edges (two or more when `include_degree2`).
bool is_intersection(const RoadNetwork& network, NodeId node, bool include_degree2 = false);

/// Intersection nodes strictly inside the polygon, ascending.
std::vector<NodeId> intersections_in_area(const RoadNetwork& network, const Ring& polygon,
                                          bool include_degree2 = false);

struct CanvassProblem {
  Ring polygon;
  NodeId entry_node = 0;
  NodeId exit_node = 0;
  std::vector<NodeId> intersections;
};

CanvassProblem make_canvass_problem(const RoadNetwork& network, const Ring& polygon,
                                    NodeId entry_node, NodeId exit_node,
                                    bool include_degree2 = false);

/// Open path entry -> every intersection -> exit. `arrive_arc` and
/// `depart_arc` are the host route's arcs at the two seams, so the expansion
/// prices the turns there. Throws ValidationError for an empty intersection
/// set and UnreachableError naming unreachable intersections.
Route solve_canvass(const CanvassProblem& problem, const RoutableGraph& graph,
                    const SolverConfig& config, ArcId arrive_arc = kNoArc,
                    ArcId depart_arc = kNoArc);

}  // namespace recon
