#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "recon/buffer.hpp"
#include "recon/config.hpp"
#include "recon/graph.hpp"
#include "recon/route.hpp"

namespace recon {

enum class DropReason { UNREACHABLE, BUDGET };

std::string_view to_string(DropReason r);

/// A stop the transect may visit. `ref` is an asset id or "node:<id>".
struct Candidate {
  std::string ref;
  NodeId node = 0;
  bool locked = false;
  WaypointKind kind = WaypointKind::CAPITAL;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct TransectProblem {
  NodeId depot = 0;
  std::vector<Candidate> candidates;
  double budget_s = kDefaultBudgetS;
  bool closed_tour = true;
  /// Previous visit order (refs). When non-empty the solver starts from it,
  /// inserting new candidates cheaply, instead of nearest-neighbour.
  std::vector<std::string> warm_order;
};

struct DroppedWaypoint {
  std::string ref;
  NodeId node = 0;
  DropReason reason = DropReason::BUDGET;

  friend bool operator==(const DroppedWaypoint&, const DroppedWaypoint&) = default;
};

struct TransectSolution {
  Route route;
  /// Candidate refs in visit order.
  std::vector<std::string> visited;
  std::vector<DroppedWaypoint> dropped;
  /// Assets within the buffer of the route that are not waypoints.
  std::set<std::string> opportunistic;
};

/// Node a waypoint snaps to: the nearer endpoint of the asset's nearest edge.
NodeId snap_asset(const RoadNetwork& network, const EdgeIndex& index, const Asset& asset);

/// Greedy max-coverage of grid cells by component type. Returns types in
/// the order chosen.
std::vector<std::string> select_seed_classes(std::span<const Asset> assets,
                                             const RoadNetwork& network, double grid_cell_m,
                                             double target_cells_fraction);

/// One candidate per non-excluded asset whose component type is listed.
TransectProblem make_transect_problem(const RoadNetwork& network, std::span<const Asset> assets,
                                      std::span<const std::string> component_types, NodeId depot,
                                      double budget_s, bool closed_tour = true);

/// Nearest-neighbour construction, 2-opt/Or-opt improvement, budget trimming
/// and seam-aware expansion. Throws ConstraintError when locked candidates
/// are unreachable or cannot fit the budget, InfeasibleError when even the
/// depot-only route exceeds it.
TransectSolution solve_transect(const TransectProblem& problem, const RoutableGraph& graph,
                                const SolverConfig& config, std::span<const Asset> assets);

struct CapitalCounts {
  std::size_t visited = 0;
  std::size_t opportunistic = 0;

  friend bool operator==(const CapitalCounts&, const CapitalCounts&) = default;
};

using CapitalBreakdown = std::array<CapitalCounts, kCapitalCount>;

/// Distinct covered assets per capital, split by whether the asset is a
/// waypoint of the route.
CapitalBreakdown count_onroute_capitals(const Route& route, const RoutableGraph& graph,
                                        std::span<const Asset> assets, double buffer_m);

}  // namespace recon
