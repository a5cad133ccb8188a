#include "recon/transect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "recon/errors.hpp"
#include "recon/tour.hpp"

namespace recon {

namespace {

// Finite stand-in for infeasible stop-to-stop legs inside the trimming loop.
constexpr double kBigLeg = 1e15;

struct Stop {
  NodeId node = 0;
  std::vector<std::size_t> members;  // candidate indices
  bool locked = false;
};

/// With reversals prohibited a stop is usable only if some arrival at it can
/// still drive on and get back to the depot.
bool can_leave(const RoutableGraph& g, const TurnModel& turn, const ShortestPathTree& from_depot,
               NodeId n, NodeId depot) {
  for (const ArcId in : g.in_arcs(n)) {
    if (from_depot.arrival_time(in) == kInfeasible) continue;
    try {
      shortest_path(g, turn, PathQuery{n, depot, in, kNoArc});
      return true;
    } catch (const NoPathError&) {
    }
  }
  return false;
}

/// Reached-asset bookkeeping over the current stop sequence. An asset counts
/// once per leg whose edges cover it and once per visited stop it belongs to.
class ReachCounter {
 public:
  ReachCounter(const RoutableGraph& graph, const AssetCoverage& coverage,
               const std::vector<ShortestPathTree>& trees, const std::vector<NodeId>& nodes,
               std::vector<std::vector<std::uint32_t>> own, std::size_t dummy)
      : graph_(graph),
        coverage_(coverage),
        trees_(trees),
        nodes_(nodes),
        own_(std::move(own)),
        dummy_(dummy),
        count_(coverage.asset_count(), 0) {}

  void reset(const std::vector<std::size_t>& seq) {
    std::fill(count_.begin(), count_.end(), 0);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      for (const auto a : leg(seq[k - 1], seq[k])) ++count_[a];
    }
    for (const std::size_t x : seq) {
      for (const auto a : own_[x]) ++count_[a];
    }
  }

  /// Assets that would no longer be reached if `x` (between a and b) left.
  std::size_t lost_if_removed(std::size_t a, std::size_t x, std::size_t b) {
    std::unordered_map<std::uint32_t, int> delta;
    for (const auto i : leg(a, x)) --delta[i];
    for (const auto i : leg(x, b)) --delta[i];
    for (const auto i : own_[x]) --delta[i];
    for (const auto i : leg(a, b)) ++delta[i];
    std::size_t lost = 0;
    for (const auto& [i, d] : delta) {
      if (count_[i] > 0 && count_[i] + d <= 0) ++lost;
    }
    return lost;
  }

 private:
  const std::vector<std::uint32_t>& leg(std::size_t from, std::size_t to) {
    const auto key = std::make_pair(from, to);
    auto it = legs_.find(key);
    if (it != legs_.end()) return it->second;
    std::vector<std::uint32_t> covered;
    if (from != dummy_ && to != dummy_ && from != to &&
        trees_[from].time_to(nodes_[to]) != kInfeasible) {
      covered = coverage_.covered(graph_, trees_[from].path_to(nodes_[to]));
    }
    return legs_.emplace(key, std::move(covered)).first->second;
  }

  const RoutableGraph& graph_;
  const AssetCoverage& coverage_;
  const std::vector<ShortestPathTree>& trees_;
  const std::vector<NodeId>& nodes_;
  std::vector<std::vector<std::uint32_t>> own_;
  std::size_t dummy_;
  std::vector<int> count_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> legs_;
};

}  // namespace

std::string_view to_string(DropReason r) {
  return r == DropReason::UNREACHABLE ? "UNREACHABLE" : "BUDGET";
}

NodeId snap_asset(const RoadNetwork& network, const EdgeIndex& index, const Asset& asset) {
  const auto hit = index.nearest(network.projection().forward(asset.location));
  const Edge& e = network.edge(hit.edge);
  const double d_from = distance(hit.projection.point, network.node(e.from).xy);
  const double d_to = distance(hit.projection.point, network.node(e.to).xy);
  return d_to < d_from ? e.to : e.from;
}

std::vector<std::string> select_seed_classes(std::span<const Asset> assets,
                                             const RoadNetwork& network, double grid_cell_m,
                                             double target_cells_fraction) {
  if (!(grid_cell_m > 0.0)) throw DomainError("grid_cell_m must be positive");
  if (!(target_cells_fraction > 0.0 && target_cells_fraction <= 1.0)) {
    throw DomainError("target_cells_fraction must lie in (0, 1]");
  }
  using Cell = std::pair<long long, long long>;
  const Rect box = network.bounds();
  std::map<std::string, std::set<Cell>> cells_by_type;
  std::set<Cell> all;
  for (const auto& a : assets) {
    if (a.excluded) continue;
    const Vec2 p = network.projection().forward(a.location);
    const Cell c{static_cast<long long>(std::floor((p.x - box.min_x) / grid_cell_m)),
                 static_cast<long long>(std::floor((p.y - box.min_y) / grid_cell_m))};
    cells_by_type[a.component_type].insert(c);
    all.insert(c);
  }
  std::vector<std::string> chosen;
  std::set<Cell> covered;
  const double target = target_cells_fraction * static_cast<double>(all.size());
  while (!cells_by_type.empty() && static_cast<double>(covered.size()) < target) {
    auto best = cells_by_type.end();
    std::size_t best_gain = 0;
    for (auto it = cells_by_type.begin(); it != cells_by_type.end(); ++it) {
      std::size_t gain = 0;
      for (const auto& c : it->second) gain += covered.contains(c) ? 0 : 1;
      if (best == cells_by_type.end() || gain > best_gain) {
        best = it;
        best_gain = gain;
      }
    }
    covered.insert(best->second.begin(), best->second.end());
    chosen.push_back(best->first);
    cells_by_type.erase(best);
  }
  return chosen;
}

TransectProblem make_transect_problem(const RoadNetwork& network, std::span<const Asset> assets,
                                      std::span<const std::string> component_types, NodeId depot,
                                      double budget_s, bool closed_tour) {
  TransectProblem p;
  p.depot = depot;
  p.budget_s = budget_s;
  p.closed_tour = closed_tour;
  const std::set<std::string> types(component_types.begin(), component_types.end());
  const EdgeIndex index(network);
  for (const auto& a : assets) {
    if (a.excluded || !types.contains(a.component_type)) continue;
    p.candidates.push_back({a.asset_id, snap_asset(network, index, a), false, WaypointKind::CAPITAL});
  }
  return p;
}

TransectSolution solve_transect(const TransectProblem& problem, const RoutableGraph& graph,
                                const SolverConfig& config, std::span<const Asset> assets) {
  if (!(problem.budget_s > 0.0)) throw ValidationError("budget_s must be positive");
  if (problem.depot >= graph.node_count()) {
    throw ValidationError(fmt::format("depot node {} does not exist", problem.depot));
  }
  const TurnModel& turn = config.turn;
  TransectSolution sol;

  std::vector<Stop> stops;
  {
    std::map<NodeId, std::size_t> by_node;
    for (std::size_t i = 0; i < problem.candidates.size(); ++i) {
      const Candidate& c = problem.candidates[i];
      if (c.node >= graph.node_count()) {
        throw ValidationError(fmt::format("candidate {} node {} does not exist", c.ref, c.node));
      }
      auto [it, fresh] = by_node.emplace(c.node, stops.size());
      if (fresh) stops.push_back({c.node, {}, false});
      stops[it->second].members.push_back(i);
      stops[it->second].locked = stops[it->second].locked || c.locked;
    }
  }

  const ShortestPathTree depot_tree(graph, turn, problem.depot);
  std::vector<Stop> reachable;
  std::vector<std::string> unreachable_locked;
  for (auto& s : stops) {
    bool ok = depot_tree.time_to(s.node) != kInfeasible;
    if (ok && problem.closed_tour) {
      ok = ShortestPathTree(graph, turn, s.node).time_to(problem.depot) != kInfeasible;
    }
    if (ok && turn.is_prohibited() && s.node != problem.depot) {
      ok = can_leave(graph, turn, depot_tree, s.node, problem.depot);
    }
    if (ok) {
      reachable.push_back(std::move(s));
      continue;
    }
    for (const std::size_t i : s.members) {
      const Candidate& c = problem.candidates[i];
      if (c.locked) unreachable_locked.push_back(c.ref);
      sol.dropped.push_back({c.ref, c.node, DropReason::UNREACHABLE});
    }
  }
  if (!unreachable_locked.empty()) {
    throw ConstraintError(fmt::format("locked waypoints unreachable: {}",
                                      fmt::join(unreachable_locked, ", ")));
  }
  stops = std::move(reachable);

  // Matrix indices: 0 depot, 1..S stops, S+1 a zero-cost free end (open).
  const std::size_t n_stops = stops.size();
  const std::size_t dummy = n_stops + 1;
  const std::size_t dim = problem.closed_tour ? n_stops + 1 : n_stops + 2;
  std::vector<NodeId> nodes{problem.depot};
  for (const auto& s : stops) nodes.push_back(s.node);
  std::vector<ShortestPathTree> trees;
  trees.reserve(n_stops + 1);
  for (const NodeId n : nodes) trees.emplace_back(graph, turn, n);
  TimeMatrix m(dim, 0.0);
  for (std::size_t i = 0; i <= n_stops; ++i) {
    for (std::size_t j = 0; j <= n_stops; ++j) {
      if (i == j) continue;
      const double t = trees[i].time_to(nodes[j]);
      m(i, j) = std::isfinite(t) ? t : kBigLeg;
    }
  }
  const std::size_t end = problem.closed_tour ? 0 : dummy;

  std::vector<std::size_t> seq;
  if (!problem.warm_order.empty()) {
    std::map<std::string, std::size_t> stop_of_ref;
    for (std::size_t k = 0; k < n_stops; ++k) {
      for (const std::size_t i : stops[k].members) {
        stop_of_ref[problem.candidates[i].ref] = k + 1;
      }
    }
    std::vector<char> placed(dim, 0);
    seq.push_back(0);
    for (const auto& ref : problem.warm_order) {
      auto it = stop_of_ref.find(ref);
      if (it == stop_of_ref.end() || placed[it->second]) continue;
      placed[it->second] = 1;
      seq.push_back(it->second);
    }
    seq.push_back(end);
    std::vector<std::size_t> rest;
    for (std::size_t k = 1; k <= n_stops; ++k) {
      if (!placed[k]) rest.push_back(k);
    }
    cheapest_insertion(m, seq, rest);
  } else {
    std::vector<std::size_t> all(n_stops);
    for (std::size_t k = 0; k < n_stops; ++k) all[k] = k + 1;
    seq = nearest_neighbor_order(m, 0, all, end);
  }
  improve_order(m, seq, config.move_limit);

  const AssetCoverage coverage(graph.network(), assets, config.buffer_m);
  std::unordered_map<std::string, std::uint32_t> asset_index;
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (!assets[i].excluded) asset_index.emplace(assets[i].asset_id, static_cast<std::uint32_t>(i));
  }
  std::vector<std::vector<std::uint32_t>> own(dim);
  for (std::size_t k = 0; k < n_stops; ++k) {
    for (const std::size_t i : stops[k].members) {
      auto it = asset_index.find(problem.candidates[i].ref);
      if (it != asset_index.end()) own[k + 1].push_back(it->second);
    }
  }
  ReachCounter reach(graph, coverage, trees, nodes, std::move(own), problem.closed_tour ? dim : dummy);
  reach.reset(seq);

  const auto trim_one = [&] {
    std::size_t best_pos = 0;
    int best_tier = -1;
    double best_key = 0.0;
    for (std::size_t pos = 1; pos + 1 < seq.size(); ++pos) {
      const std::size_t x = seq[pos];
      if (stops[x - 1].locked) continue;
      const std::size_t a = seq[pos - 1];
      const std::size_t b = seq[pos + 1];
      const double saved = m(a, x) + m(x, b) - m(a, b);
      const std::size_t lost = reach.lost_if_removed(a, x, b);
      const int tier = (lost == 0 && saved > 0.0) ? 1 : 0;
      const double key = tier == 1 ? saved : saved / static_cast<double>(std::max<std::size_t>(lost, 1));
      if (tier > best_tier || (tier == best_tier && key > best_key)) {
        best_tier = tier;
        best_key = key;
        best_pos = pos;
      }
    }
    if (best_pos == 0) {
      if (seq.size() > 2) {
        throw ConstraintError(fmt::format(
            "locked waypoints alone need {:.1f} s, over the {:.1f} s budget",
            sequence_cost(m, seq), problem.budget_s));
      }
      throw InfeasibleError("depot-only route exceeds the budget");
    }
    const std::size_t x = seq[best_pos];
    for (const std::size_t i : stops[x - 1].members) {
      sol.dropped.push_back({problem.candidates[i].ref, stops[x - 1].node, DropReason::BUDGET});
    }
    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(best_pos));
    improve_order(m, seq, config.move_limit);
    reach.reset(seq);
  };

  for (;;) {
    while (sequence_cost(m, seq) > problem.budget_s) trim_one();
    std::vector<NodeId> walk;
    for (const std::size_t x : seq) {
      if (x != dummy) walk.push_back(nodes[x]);
    }
    std::vector<std::size_t> positions;
    auto arcs = expand_stops(graph, turn, walk, kNoArc, kNoArc, &positions);
    std::vector<Waypoint> wps;
    const std::string depot_ref = fmt::format("node:{}", problem.depot);
    wps.push_back({0, problem.depot, WaypointKind::DEPOT, depot_ref});
    sol.visited.clear();
    for (std::size_t k = 1; k < walk.size(); ++k) {
      const std::size_t x = seq[k];
      if (x == 0) {
        wps.push_back({positions[k], problem.depot, WaypointKind::DEPOT, depot_ref});
        continue;
      }
      for (const std::size_t i : stops[x - 1].members) {
        const Candidate& c = problem.candidates[i];
        WaypointKind kind = c.kind;
        if (c.locked && kind == WaypointKind::CAPITAL) kind = WaypointKind::LOCKED;
        wps.push_back({positions[k], c.node, kind, c.ref});
        sol.visited.push_back(c.ref);
      }
    }
    Route route = Route::make(graph, turn, problem.depot, std::move(arcs), std::move(wps));
    if (route.total_time_s() <= problem.budget_s) {
      sol.route = std::move(route);
      break;
    }
    trim_one();
  }

  const std::set<std::string> visited(sol.visited.begin(), sol.visited.end());
  for (const auto& id : route_coverage(sol.route, graph, assets, config.buffer_m)) {
    if (!visited.contains(id)) sol.opportunistic.insert(id);
  }
  return sol;
}

CapitalBreakdown count_onroute_capitals(const Route& route, const RoutableGraph& graph,
                                        std::span<const Asset> assets, double buffer_m) {
  CapitalBreakdown out{};
  std::set<std::string> waypoint_refs;
  for (const auto& w : route.waypoints()) waypoint_refs.insert(w.ref);
  const auto covered = route_coverage(route, graph, assets, buffer_m);
  for (const auto& a : assets) {
    if (a.excluded || !covered.contains(a.asset_id)) continue;
    auto& c = out[static_cast<std::size_t>(a.capital)];
    if (waypoint_refs.contains(a.asset_id)) {
      ++c.visited;
    } else {
      ++c.opportunistic;
    }
  }
  return out;
}

}  // namespace recon
