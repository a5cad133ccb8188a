#pragma once

#include <span>
#include <string>
#include <vector>

#include "recon/buffer.hpp"
#include "recon/config.hpp"
#include "recon/route.hpp"

namespace recon {

struct PrunedSpur {
  /// Node-sequence position of the spur's base in the route it was cut from.
  std::size_t position = 0;
  NodeId base = 0;
  NodeId apex = 0;
  std::size_t arc_count = 0;
  double time_saved_s = 0.0;
  std::vector<std::string> lost_assets;
};

struct PruneReport {
  std::vector<PrunedSpur> spurs;
  /// Waypoints whose node no longer appears on the route.
  std::vector<Waypoint> dropped_waypoints;
  /// Union of every spur's lost assets, sorted.
  std::vector<std::string> lost_assets;
  double time_saved_s = 0.0;
};

struct PruneResult {
  Route route;
  PruneReport report;
};

/// Cuts every maximal out-and-back spur whose removal loses fewer than
/// `min_assets_per_spur` covered assets. With kInfiniteThreshold the result
/// has no three-point turns. Waypoints inside a cut spur move to another
/// visit of the same node or are dropped.
PruneResult prune_spurs(const Route& route, const RoutableGraph& graph, const TurnModel& turn,
                        std::span<const Asset> assets, double buffer_m,
                        std::size_t min_assets_per_spur = kInfiniteThreshold);

/// Replaces the capitals segment between the first visit of `entry_sync`
/// and the next visit of `exit_sync` with `canvass`. Throws SyncError when
/// the sync nodes are missing, out of order, or not the canvass endpoints.
Route splice(const Route& capitals, const Route& canvass, NodeId entry_sync, NodeId exit_sync,
             const RoutableGraph& graph, const TurnModel& turn);

/// Node-sequence positions of the splice window in `capitals`.
std::pair<std::size_t, std::size_t> sync_window(const Route& capitals, NodeId entry_sync,
                                                NodeId exit_sync);

}  // namespace recon
