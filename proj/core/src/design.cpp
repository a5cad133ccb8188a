#include "recon/design.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

namespace {

constexpr int kMaxBudgetRounds = 50;

std::string node_ref(NodeId n) { return fmt::format("node:{}", n); }

std::optional<NodeId> parse_node_ref(std::string_view ref) {
  if (!ref.starts_with("node:")) return std::nullopt;
  NodeId n = 0;
  const auto digits = ref.substr(5);
  if (digits.empty()) return std::nullopt;
  for (const char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<NodeId>(c - '0');
  }
  return n;
}

/// Refs of the route's transect-level waypoints, in route order.
std::vector<std::string> waypoint_pool(const Route& route) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& w : route.waypoints()) {
    if (w.kind == WaypointKind::DEPOT || w.kind == WaypointKind::INTERSECTION) continue;
    if (seen.insert(w.ref).second) out.push_back(w.ref);
  }
  return out;
}

void check_ref(const DesignContext& ctx, const std::string& ref) {
  if (auto n = parse_node_ref(ref)) {
    if (*n >= ctx.network->node_count()) {
      throw ValidationError(fmt::format("node {} does not exist", *n));
    }
    return;
  }
  const bool known = std::any_of(ctx.assets.begin(), ctx.assets.end(),
                                 [&](const Asset& a) { return a.asset_id == ref; });
  if (!known) throw ValidationError(fmt::format("unknown asset '{}'", ref));
}

}  // namespace

std::string WaypointRef::ref() const {
  if (asset_id) return *asset_id;
  if (node) return node_ref(*node);
  throw ValidationError("waypoint reference needs asset_id or node");
}

std::string_view command_kind(const EditCommand& c) {
  static constexpr std::string_view kNames[] = {"LOCK_WAYPOINT", "EXCLUDE_ASSET", "ADD_WAYPOINT",
                                                "AVOID_AREA",    "PRUNE_SPURS",   "SET_BUDGET"};
  return kNames[c.index()];
}

std::vector<EdgeId> edges_in_areas(const RoadNetwork& network, std::span<const GeoRing> polygons) {
  std::vector<EdgeId> out;
  std::vector<Ring> rings;
  for (const auto& p : polygons) rings.push_back(network.projection().forward_ring(p));
  for (const auto& e : network.edges()) {
    for (const auto& r : rings) {
      if (polyline_touches_polygon(e.shape, r)) {
        out.push_back(e.id);
        break;
      }
    }
  }
  return out;
}

Design solve_design(const DesignContext& ctx, DesignSpec spec) {
  ctx.config.validate();
  if (!(spec.budget_s > 0.0)) throw ValidationError("budget_s must be positive");
  const RoadNetwork& net = *ctx.network;
  if (spec.depot >= net.node_count()) {
    throw ValidationError(fmt::format("depot node {} does not exist", spec.depot));
  }
  Design d;
  d.assets = ctx.assets;
  for (const auto& id : spec.excluded) check_ref(ctx, id);
  for (auto& a : d.assets) a.excluded = a.excluded || spec.excluded.contains(a.asset_id);
  d.graph = std::make_shared<const RoutableGraph>(
      build_graph(ctx.network, ctx.config, edges_in_areas(net, spec.avoid_areas)));
  const RoutableGraph& graph = *d.graph;
  const TurnModel& turn = ctx.config.turn;

  // Candidate refs in a fixed order: pool (or seed-class assets), added,
  // locked, then sync nodes.
  std::vector<std::string> refs;
  if (spec.pool) {
    refs = *spec.pool;
  } else {
    const std::set<std::string> types(spec.seed_classes.begin(), spec.seed_classes.end());
    for (const auto& a : d.assets) {
      if (!a.excluded && types.contains(a.component_type)) refs.push_back(a.asset_id);
    }
  }
  refs.insert(refs.end(), spec.added.begin(), spec.added.end());
  refs.insert(refs.end(), spec.locked.begin(), spec.locked.end());
  std::set<std::string> sync_refs;
  for (const auto& step : spec.canvass) {
    for (const NodeId n : {step.entry_sync, step.exit_sync}) {
      if (n >= net.node_count()) throw ValidationError(fmt::format("sync node {} does not exist", n));
      sync_refs.insert(node_ref(n));
      refs.push_back(node_ref(n));
    }
  }

  std::map<std::string, const Asset*> by_id;
  for (const auto& a : d.assets) by_id.emplace(a.asset_id, &a);
  const EdgeIndex index(net);
  std::vector<Candidate> candidates;
  std::set<std::string> seen;
  for (const auto& ref : refs) {
    if (!seen.insert(ref).second) continue;
    Candidate c;
    c.ref = ref;
    if (auto n = parse_node_ref(ref)) {
      if (*n >= net.node_count()) throw ValidationError(fmt::format("node {} does not exist", *n));
      c.node = *n;
    } else {
      auto it = by_id.find(ref);
      if (it == by_id.end()) throw ValidationError(fmt::format("unknown asset '{}'", ref));
      if (it->second->excluded) continue;
      c.node = snap_asset(net, index, *it->second);
    }
    c.locked = spec.locked.contains(ref) || sync_refs.contains(ref);
    if (sync_refs.contains(ref)) c.kind = WaypointKind::SYNC;
    candidates.push_back(std::move(c));
  }

  double transect_budget = spec.budget_s;
  for (int round = 0; round < kMaxBudgetRounds; ++round) {
    TransectProblem problem{spec.depot, candidates, transect_budget, spec.closed_tour,
                            spec.warm_order};
    TransectSolution t = solve_transect(problem, graph, ctx.config, d.assets);
    Route r = t.route;
    for (const auto& step : spec.canvass) {
      NodeId entry = step.entry_sync;
      NodeId exit = step.exit_sync;
      std::pair<std::size_t, std::size_t> window;
      try {
        window = sync_window(r, entry, exit);
      } catch (const SyncError&) {
        std::swap(entry, exit);
        window = sync_window(r, entry, exit);
      }
      const ArcId arrive = window.first > 0 ? r.arcs()[window.first - 1] : kNoArc;
      const ArcId depart = window.second < r.arcs().size() ? r.arcs()[window.second] : kNoArc;
      const auto problem_c = make_canvass_problem(net, net.projection().forward_ring(step.polygon),
                                                  entry, exit,
                                                  ctx.config.include_degree2_intersections);
      const Route c = solve_canvass(problem_c, graph, ctx.config, arrive, depart);
      r = splice(r, c, entry, exit, graph, turn);
    }
    std::optional<PruneReport> pruned;
    if (spec.prune_threshold) {
      auto p = prune_spurs(r, graph, turn, d.assets, ctx.config.buffer_m, *spec.prune_threshold);
      r = std::move(p.route);
      pruned = std::move(p.report);
    }
    if (r.total_time_s() <= spec.budget_s) {
      d.transect = std::move(t);
      d.route = std::move(r);
      d.prune = std::move(pruned);
      d.transect_budget_s = transect_budget;
      d.spec = std::move(spec);
      return d;
    }
    const double overshoot = r.total_time_s() - spec.budget_s;
    transect_budget = std::min(transect_budget, t.route.total_time_s()) - overshoot;
    if (!(transect_budget > 0.0)) {
      throw ConstraintError(fmt::format(
          "canvass and locked waypoints need {:.1f} s, over the {:.1f} s budget", r.total_time_s(),
          spec.budget_s));
    }
  }
  throw InfeasibleError("route could not be fitted to the budget");
}

Design add_canvass(const DesignContext& ctx, const Design& current, const CanvassStep& step) {
  DesignSpec spec = current.spec;
  spec.pool = waypoint_pool(current.route);
  spec.warm_order = *spec.pool;
  spec.canvass.push_back(step);
  return solve_design(ctx, std::move(spec));
}

Design apply_edits(const DesignContext& ctx, const Design& current,
                   std::span<const EditCommand> commands) {
  if (commands.empty()) return current;
  DesignSpec spec = current.spec;
  spec.pool = waypoint_pool(current.route);
  spec.warm_order = *spec.pool;
  const auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& cmd : commands) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, LockWaypoint>) {
            const std::string ref = c.target.ref();
            check_ref(ctx, ref);
            spec.locked.insert(ref);
            spec.excluded.erase(ref);
          } else if constexpr (std::is_same_v<T, ExcludeAsset>) {
            check_ref(ctx, c.asset_id);
            spec.excluded.insert(c.asset_id);
            spec.locked.erase(c.asset_id);
            std::erase(spec.added, c.asset_id);
          } else if constexpr (std::is_same_v<T, AddWaypoint>) {
            const std::string ref = c.target.ref();
            check_ref(ctx, ref);
            spec.excluded.erase(ref);
            add_unique(spec.added, ref);
          } else if constexpr (std::is_same_v<T, AvoidArea>) {
            if (c.polygon.size() < 3) throw ValidationError("avoid area needs at least 3 vertices");
            spec.avoid_areas.push_back(c.polygon);
          } else if constexpr (std::is_same_v<T, PruneSpurs>) {
            spec.prune_threshold = c.min_assets_per_spur;
          } else if constexpr (std::is_same_v<T, SetBudget>) {
            if (!(c.seconds > 0.0)) throw ValidationError("budget must be positive");
            spec.budget_s = c.seconds;
          }
        },
        cmd);
  }
  return solve_design(ctx, std::move(spec));
}

}  // namespace recon
