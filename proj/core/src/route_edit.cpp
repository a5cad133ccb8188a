#include "recon/route_edit.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

struct Spur {
  std::size_t l = 0;  // first arc
  std::size_t r = 0;  // last arc
};

std::optional<Spur> next_spur(const std::vector<ArcId>& arcs, const RoutableGraph& graph,
                              std::size_t from) {
  for (std::size_t k = from; k + 1 < arcs.size(); ++k) {
    if (graph.reverse(arcs[k]) != arcs[k + 1]) continue;
    Spur s{k, k + 1};
    while (s.l > 0 && s.r + 1 < arcs.size() && arcs[s.r + 1] == graph.reverse(arcs[s.l - 1])) {
      --s.l;
      ++s.r;
    }
    return s;
  }
  return std::nullopt;
}

}  // namespace

PruneResult prune_spurs(const Route& route, const RoutableGraph& graph, const TurnModel& turn,
                        std::span<const Asset> assets, double buffer_m,
                        std::size_t min_assets_per_spur) {
  PruneResult out{route, {}};
  const AssetCoverage coverage(graph.network(), assets, buffer_m);
  std::vector<int> count(assets.size(), 0);
  for (const ArcId a : route.arcs()) {
    for (const auto i : coverage.near_edge(graph.arc(a).edge)) ++count[i];
  }
  std::set<std::string> lost_all;

  std::size_t scan = 0;
  while (auto spur = next_spur(out.route.arcs(), graph, scan)) {
    const Route& cur = out.route;
    const auto& arcs = cur.arcs();
    std::vector<int> delta(assets.size(), 0);
    for (std::size_t k = spur->l; k <= spur->r; ++k) {
      for (const auto i : coverage.near_edge(graph.arc(arcs[k]).edge)) ++delta[i];
    }
    std::vector<std::string> lost;
    for (std::size_t i = 0; i < assets.size(); ++i) {
      if (count[i] > 0 && count[i] == delta[i]) lost.push_back(assets[i].asset_id);
    }
    if (lost.size() >= min_assets_per_spur) {
      scan = spur->r;
      continue;
    }

    const std::size_t cut = spur->r - spur->l + 1;
    std::vector<ArcId> kept(arcs.begin(), arcs.begin() + static_cast<std::ptrdiff_t>(spur->l));
    kept.insert(kept.end(), arcs.begin() + static_cast<std::ptrdiff_t>(spur->r) + 1, arcs.end());
    std::vector<NodeId> new_nodes{cur.start()};
    for (const ArcId a : kept) new_nodes.push_back(graph.arc(a).head);

    std::vector<Waypoint> wps;
    for (Waypoint w : cur.waypoints()) {
      if (w.position <= spur->l) {
        wps.push_back(std::move(w));
      } else if (w.position > spur->r) {
        w.position -= cut;
        wps.push_back(std::move(w));
      } else {
        auto it = std::find(new_nodes.begin() + static_cast<std::ptrdiff_t>(spur->l), new_nodes.end(), w.node);
        if (it == new_nodes.end()) {
          auto rit = std::find(std::make_reverse_iterator(new_nodes.begin() + static_cast<std::ptrdiff_t>(spur->l)),
                               new_nodes.rend(), w.node);
          if (rit == new_nodes.rend()) {
            out.report.dropped_waypoints.push_back(std::move(w));
            continue;
          }
          it = std::prev(rit.base());
        }
        w.position = static_cast<std::size_t>(it - new_nodes.begin());
        wps.push_back(std::move(w));
      }
    }

    PrunedSpur rec;
    rec.position = spur->l;
    rec.base = graph.arc(arcs[spur->l]).tail;
    rec.apex = graph.arc(arcs[(spur->l + spur->r) / 2]).head;
    rec.arc_count = cut;
    Route next = Route::make(graph, turn, cur.start(), std::move(kept), std::move(wps));
    rec.time_saved_s = cur.total_time_s() - next.total_time_s();
    rec.lost_assets = lost;
    for (std::size_t i = 0; i < assets.size(); ++i) count[i] -= delta[i];
    lost_all.insert(lost.begin(), lost.end());
    out.report.time_saved_s += rec.time_saved_s;
    out.report.spurs.push_back(std::move(rec));
    out.route = std::move(next);
    scan = spur->l > 0 ? spur->l - 1 : 0;
  }
  out.report.lost_assets.assign(lost_all.begin(), lost_all.end());
  return out;
}

std::pair<std::size_t, std::size_t> sync_window(const Route& capitals, NodeId entry_sync,
                                                NodeId exit_sync) {
  const auto i = capitals.find_node(entry_sync);
  if (!i) throw SyncError(fmt::format("entry sync node {} is not on the route", entry_sync));
  const auto j = capitals.find_node(exit_sync, *i);
  if (!j) {
    throw SyncError(fmt::format("exit sync node {} does not follow entry sync node {}", exit_sync,
                                entry_sync));
  }
  return {*i, *j};
}

Route splice(const Route& capitals, const Route& canvass, NodeId entry_sync, NodeId exit_sync,
             const RoutableGraph& graph, const TurnModel& turn) {
  if (canvass.start() != entry_sync || canvass.end() != exit_sync) {
    throw SyncError("canvass route does not run between the sync nodes");
  }
  const auto [i, j] = sync_window(capitals, entry_sync, exit_sync);
  const auto& cap = capitals.arcs();
  const std::size_t span = canvass.arcs().size();

  std::vector<ArcId> arcs(cap.begin(), cap.begin() + static_cast<std::ptrdiff_t>(i));
  arcs.insert(arcs.end(), canvass.arcs().begin(), canvass.arcs().end());
  arcs.insert(arcs.end(), cap.begin() + static_cast<std::ptrdiff_t>(j), cap.end());

  std::set<std::string> canvass_refs;
  std::vector<Waypoint> wps;
  for (Waypoint w : canvass.waypoints()) {
    canvass_refs.insert(w.ref);
    w.position += i;
    wps.push_back(std::move(w));
  }
  for (Waypoint w : capitals.waypoints()) {
    if (w.position < i) {
      wps.push_back(std::move(w));
    } else if (w.position > j) {
      w.position = w.position - j + i + span;
      wps.push_back(std::move(w));
    } else if (!canvass_refs.contains(w.ref)) {
      if (w.position == i) {
        w.position = i;
      } else if (w.position == j) {
        w.position = i + span;
      } else if (auto at = canvass.find_node(w.node)) {
        w.position = i + *at;
      } else {
        continue;
      }
      wps.push_back(std::move(w));
    }
  }
  return Route::make(graph, turn, capitals.start(), std::move(arcs), std::move(wps));
}

}  // namespace recon
