#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/buffer.hpp"
#include "recon/canvass.hpp"
#include "recon/errors.hpp"
#include "recon/route_edit.hpp"

using namespace recon;

namespace {

// Line 0-1-2-3 with a two-edge dead end 1-4-5.
struct Comb {
  std::shared_ptr<const RoadNetwork> net = testkit::planar_network(
      {{0, 0}, {100, 0}, {200, 0}, {300, 0}, {100, 100}, {100, 200}},
      {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}});
  SolverConfig config = testkit::tenth_second_config();
  RoutableGraph graph = build_graph(net, config);

  ArcId fwd(EdgeId e) const { return graph.arc_for(e, true); }
  ArcId back(EdgeId e) const { return graph.arc_for(e, false); }

  // 0 -> 1 -> 4 -> 5 -> 4 -> 1 -> 2 -> 3
  Route with_spur(std::vector<Waypoint> wps = {}) const {
    return Route::make(graph, config.turn, 0,
                       {fwd(0), fwd(3), fwd(4), back(4), back(3), fwd(1), fwd(2)}, std::move(wps));
  }
};

}  // namespace

TEST(Prune, CutsMaximalSpurAndReportsSavings) {
  const Comb c;
  const Route r = c.with_spur();
  ASSERT_EQ(r.maneuvers().size(), 1u);
  const auto out = prune_spurs(r, c.graph, c.config.turn, {}, 30.0);
  EXPECT_TRUE(out.route.maneuvers().empty());
  EXPECT_EQ(out.route.arcs().size(), 3u);
  ASSERT_EQ(out.report.spurs.size(), 1u);
  EXPECT_EQ(out.report.spurs[0].base, 1u);
  EXPECT_EQ(out.report.spurs[0].apex, 5u);
  EXPECT_EQ(out.report.spurs[0].arc_count, 4u);
  EXPECT_NEAR(out.report.spurs[0].time_saved_s, 40.0 + kDefaultUTurnPenaltyS, 1e-6);
  EXPECT_DOUBLE_EQ(out.report.time_saved_s, r.total_time_s() - out.route.total_time_s());
}

TEST(Prune, ThresholdKeepsSpursThatCoverEnoughAssets) {
  const Comb c;
  const std::vector<Asset> assets{testkit::asset_at(*c.net, "tip", {110, 190}),
                                  testkit::asset_at(*c.net, "mid", {90, 150})};
  const Route r = c.with_spur();
  const auto keep = prune_spurs(r, c.graph, c.config.turn, assets, 30.0, 2);
  EXPECT_EQ(keep.route, r);
  EXPECT_TRUE(keep.report.spurs.empty());
  const auto cut = prune_spurs(r, c.graph, c.config.turn, assets, 30.0, 3);
  EXPECT_EQ(cut.report.lost_assets, (std::vector<std::string>{"mid", "tip"}));
}

TEST(Prune, InteriorWaypointsMoveOrDrop) {
  const Comb c;
  const Route r = c.with_spur({{0, 0, WaypointKind::DEPOT, "node:0"},
                               {3, 5, WaypointKind::CAPITAL, "apex"},
                               {5, 1, WaypointKind::CAPITAL, "base"},
                               {7, 3, WaypointKind::CAPITAL, "end"}});
  const auto out = prune_spurs(r, c.graph, c.config.turn, {}, 30.0);
  ASSERT_EQ(out.report.dropped_waypoints.size(), 1u);
  EXPECT_EQ(out.report.dropped_waypoints[0].ref, "apex");
  std::map<std::string, std::size_t> pos;
  for (const auto& w : out.route.waypoints()) pos[w.ref] = w.position;
  EXPECT_EQ(pos.at("base"), 1u);
  EXPECT_EQ(pos.at("end"), 3u);
}

TEST(Prune, LostAssetsEqualDifferenceOracle) {
  const auto city = testkit::make_grid_city({.spur_count = 3});
  const auto g = build_graph(city.network, {});
  const TurnModel turn;
  for (int k = 0; k < 3; ++k) {
    const auto [bi, bj] = testkit::spur_base(k);
    const std::vector<NodeId> stops{testkit::grid_node(*city.network, 0, 0),
                                    testkit::spur_tip(*city.network, k),
                                    testkit::grid_node(*city.network, 20, 20)};
    (void)bi;
    (void)bj;
    const auto arcs = expand_stops(g, turn, stops);
    const Route r = Route::make(g, turn, stops.front(), arcs, {});
    ASSERT_GE(r.maneuvers().size(), 1u);
    const auto out = prune_spurs(r, g, turn, city.assets, kDefaultBufferM);
    EXPECT_EQ(oracle::count_reversals(g, out.route.arcs()), 0u);
    std::set<EdgeId> before, after;
    for (ArcId a : r.arcs()) before.insert(g.arc(a).edge);
    for (ArcId a : out.route.arcs()) after.insert(g.arc(a).edge);
    const auto cov_before = oracle::covered_assets(*city.network, city.assets, before, kDefaultBufferM);
    const auto cov_after = oracle::covered_assets(*city.network, city.assets, after, kDefaultBufferM);
    std::vector<std::string> diff;
    std::set_difference(cov_before.begin(), cov_before.end(), cov_after.begin(), cov_after.end(),
                        std::back_inserter(diff));
    EXPECT_EQ(out.report.lost_assets, diff);
    EXPECT_NE(std::find(diff.begin(), diff.end(), "spur-" + std::to_string(k)), diff.end());
  }
}

TEST(Splice, ReplacesWindowAndShiftsWaypoints) {
  const auto city = testkit::make_grid_city();
  const auto g = build_graph(city.network, {});
  const TurnModel turn;
  const NodeId a = testkit::grid_node(*city.network, 0, 0);
  const NodeId s1 = testkit::grid_node(*city.network, 3, 3);
  const NodeId s2 = testkit::grid_node(*city.network, 8, 8);
  const NodeId b = testkit::grid_node(*city.network, 12, 12);
  std::vector<std::size_t> pos;
  const std::vector<NodeId> stops{a, s1, s2, b};
  const auto arcs = expand_stops(g, turn, stops, kNoArc, kNoArc, &pos);
  const Route cap = Route::make(g, turn, a, arcs,
                                {{pos[0], a, WaypointKind::DEPOT, "node:a"},
                                 {pos[3], b, WaypointKind::CAPITAL, "far"}});
  const Projection& p = city.network->projection();
  const Ring area{p.forward(testkit::grid_point(3.5, 3.5)), p.forward(testkit::grid_point(7.5, 3.5)),
                  p.forward(testkit::grid_point(7.5, 7.5)), p.forward(testkit::grid_point(3.5, 7.5))};
  const auto problem = make_canvass_problem(*city.network, area, s1, s2);
  const Route can = solve_canvass(problem, g, {});
  const Route joined = splice(cap, can, s1, s2, g, turn);
  EXPECT_EQ(joined.start(), a);
  EXPECT_EQ(joined.end(), b);
  for (NodeId v : problem.intersections) EXPECT_TRUE(joined.find_node(v).has_value());
  EXPECT_EQ(joined.waypoints().back().ref, "far");
  EXPECT_EQ(joined.waypoints().back().position, joined.nodes().size() - 1);
  EXPECT_THROW(splice(cap, can, s2, s1, g, turn), SyncError);
  EXPECT_THROW(sync_window(cap, testkit::grid_node(*city.network, 20, 0), s2), SyncError);
}
