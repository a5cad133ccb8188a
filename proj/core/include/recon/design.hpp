#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "recon/canvass.hpp"
#include "recon/route_edit.hpp"
#include "recon/transect.hpp"

namespace recon {

/// Waypoint reference: an asset id, or a bare node.
struct WaypointRef {
  std::optional<std::string> asset_id;
  std::optional<NodeId> node;

  [[nodiscard]] std::string ref() const;
  friend bool operator==(const WaypointRef&, const WaypointRef&) = default;
};

struct LockWaypoint {
  WaypointRef target;
  friend bool operator==(const LockWaypoint&, const LockWaypoint&) = default;
};
struct ExcludeAsset {
  std::string asset_id;
  friend bool operator==(const ExcludeAsset&, const ExcludeAsset&) = default;
};
struct AddWaypoint {
  WaypointRef target;
  friend bool operator==(const AddWaypoint&, const AddWaypoint&) = default;
};
struct AvoidArea {
  GeoRing polygon;
  friend bool operator==(const AvoidArea&, const AvoidArea&) = default;
};
struct PruneSpurs {
  std::size_t min_assets_per_spur = kInfiniteThreshold;
  friend bool operator==(const PruneSpurs&, const PruneSpurs&) = default;
};
struct SetBudget {
  double seconds = 0.0;
  friend bool operator==(const SetBudget&, const SetBudget&) = default;
};

using EditCommand =
    std::variant<LockWaypoint, ExcludeAsset, AddWaypoint, AvoidArea, PruneSpurs, SetBudget>;

std::string_view command_kind(const EditCommand& c);

struct CanvassStep {
  GeoRing polygon;
  NodeId entry_sync = 0;
  NodeId exit_sync = 0;
};

/// Everything needed to re-derive a route from the datasets.
struct DesignSpec {
  NodeId depot = 0;
  std::vector<std::string> seed_classes;
  double budget_s = kDefaultBudgetS;
  bool closed_tour = true;
  std::set<std::string> locked;
  std::set<std::string> excluded;
  std::vector<std::string> added;
  std::vector<GeoRing> avoid_areas;
  std::vector<CanvassStep> canvass;
  std::optional<std::size_t> prune_threshold;
  /// When set, only these refs (plus added, locked and sync nodes) are
  /// candidates.
  std::optional<std::vector<std::string>> pool;
  std::vector<std::string> warm_order;
};

struct DesignContext {
  std::shared_ptr<const RoadNetwork> network;
  std::vector<Asset> assets;
  SolverConfig config;
};

struct Design {
  DesignSpec spec;
  /// Assets with the spec's exclusions applied.
  std::vector<Asset> assets;
  std::shared_ptr<const RoutableGraph> graph;
  TransectSolution transect;
  Route route;
  std::optional<PruneReport> prune;
  /// Transect budget that made the spliced route fit.
  double transect_budget_s = 0.0;
};

/// Edges whose shape touches any of the polygons.
std::vector<EdgeId> edges_in_areas(const RoadNetwork& network, std::span<const GeoRing> polygons);

/// Solves transect, splices canvass steps and prunes, shrinking the transect
/// budget until the whole route fits.
Design solve_design(const DesignContext& ctx, DesignSpec spec);

/// Adds one canvass step and re-solves.
Design add_canvass(const DesignContext& ctx, const Design& current, const CanvassStep& step);

/// Folds the commands into the spec and re-solves warm from the current
/// route. An empty list returns the current design unchanged.
Design apply_edits(const DesignContext& ctx, const Design& current,
                   std::span<const EditCommand> commands);

}  // namespace recon
