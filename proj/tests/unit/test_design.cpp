#include <gtest/gtest.h>

#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/design.hpp"
#include "recon/errors.hpp"
#include "recon/session.hpp"

using namespace recon;

namespace {

struct Fixture {
  testkit::GridCity city = testkit::make_grid_city();
  DesignContext ctx{city.network, city.assets, SolverConfig{}};

  NodeId node(int i, int j) const { return testkit::grid_node(*city.network, i, j); }

  DesignSpec spec(double budget = 3600) const {
    DesignSpec s;
    s.depot = node(10, 10);
    s.seed_classes = {"library", "pharmacy"};
    s.budget_s = budget;
    return s;
  }

  GeoRing rect(double i0, double j0, double i1, double j1) const {
    return {testkit::grid_point(i0, j0), testkit::grid_point(i1, j0), testkit::grid_point(i1, j1),
            testkit::grid_point(i0, j1)};
  }
};

std::set<std::string> refs_of(const Route& r, WaypointKind kind) {
  std::set<std::string> out;
  for (const auto& w : r.waypoints()) {
    if (w.kind == kind) out.insert(w.ref);
  }
  return out;
}

}  // namespace

TEST(Design, CanvassStepIsSplicedBetweenSyncs) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const CanvassStep step{f.rect(11.5, 11.5, 14.5, 14.5), f.node(11, 11), f.node(15, 15)};
  const Design d = add_canvass(f.ctx, base, step);
  EXPECT_LE(d.route.total_time_s(), 3600.0);
  const auto ring = f.city.network->projection().forward_ring(step.polygon);
  for (NodeId v : oracle::intersections_inside(*f.city.network, ring, 3)) {
    EXPECT_TRUE(d.route.find_node(v).has_value()) << v;
  }
  EXPECT_TRUE(refs_of(d.route, WaypointKind::SYNC).contains("node:" + std::to_string(f.node(11, 11))));
  EXPECT_EQ(refs_of(d.route, WaypointKind::INTERSECTION).size(), 9u);
}

TEST(Design, ExcludedAssetLeavesRouteAndReport) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const auto caps = refs_of(base.route, WaypointKind::CAPITAL);
  ASSERT_FALSE(caps.empty());
  const std::string victim = *caps.begin();
  const std::vector<EditCommand> cmds{ExcludeAsset{victim}};
  const Design d = apply_edits(f.ctx, base, cmds);
  EXPECT_FALSE(refs_of(d.route, WaypointKind::CAPITAL).contains(victim));
  EXPECT_FALSE(route_coverage(d.route, *d.graph, d.assets, kDefaultBufferM).contains(victim));
}

TEST(Design, LockAllThenTighterBudgetKeepsWaypointSet) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  std::vector<EditCommand> cmds;
  const auto caps = refs_of(base.route, WaypointKind::CAPITAL);
  for (const auto& ref : caps) cmds.push_back(LockWaypoint{{ref, std::nullopt}});
  cmds.push_back(SetBudget{base.route.total_time_s() + 1.0});
  const Design d = apply_edits(f.ctx, base, cmds);
  EXPECT_EQ(refs_of(d.route, WaypointKind::LOCKED), caps);
  EXPECT_LE(d.route.total_time_s(), base.route.total_time_s() + 1.0);
}

TEST(Design, AvoidAreaRemovesEdges) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const GeoRing area = f.rect(8.5, 8.5, 9.5, 12.5);
  const std::vector<EditCommand> cmds{AvoidArea{area}};
  const Design d = apply_edits(f.ctx, base, cmds);
  const auto banned = edges_in_areas(*f.city.network, std::vector<GeoRing>{area});
  ASSERT_FALSE(banned.empty());
  for (ArcId a : d.route.arcs()) {
    EXPECT_EQ(std::find(banned.begin(), banned.end(), d.graph->arc(a).edge), banned.end());
  }
}

TEST(Design, PruneCommandClearsThreePointTurns) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const std::vector<EditCommand> cmds{PruneSpurs{}};
  const Design d = apply_edits(f.ctx, base, cmds);
  EXPECT_TRUE(d.route.maneuvers().empty());
  ASSERT_TRUE(d.prune.has_value());
}

TEST(Design, EmptyEditListIsNoOp) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const Design d = apply_edits(f.ctx, base, {});
  EXPECT_EQ(d.route, base.route);
}

TEST(Design, BadReferencesAreValidationErrors) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const std::vector<EditCommand> unknown{ExcludeAsset{"nope"}};
  EXPECT_THROW(apply_edits(f.ctx, base, unknown), ValidationError);
  const std::vector<EditCommand> bad_node{LockWaypoint{{std::nullopt, 99999}}};
  EXPECT_THROW(apply_edits(f.ctx, base, bad_node), ValidationError);
  const std::vector<EditCommand> bad_budget{SetBudget{0}};
  EXPECT_THROW(apply_edits(f.ctx, base, bad_budget), ValidationError);
}

TEST(Design, AddedWaypointIsVisited) {
  const Fixture f;
  const Design base = solve_design(f.ctx, f.spec());
  const std::vector<EditCommand> cmds{AddWaypoint{{"a-000", std::nullopt}}};
  const Design d = apply_edits(f.ctx, base, cmds);
  EXPECT_TRUE(refs_of(d.route, WaypointKind::CAPITAL).contains("a-000"));
}

TEST(Session, ReplayReproducesRoute) {
  const Fixture f;
  SessionRequest req;
  req.depot = f.node(10, 10);
  req.budget_s = 3600;
  Session s("s1", req, f.city.network, f.city.assets);
  EXPECT_FALSE(s.request().seed_classes.empty());
  s.add_canvass({f.rect(11.5, 11.5, 13.5, 13.5), f.node(11, 11), f.node(14, 14)});
  s.apply_edits({PruneSpurs{}, SetBudget{3000}});
  const Json snap = s.snapshot();
  std::vector<SessionOp> history;
  for (const auto& op : snap["history"]) history.push_back(session_op_from_json(op));
  const Session r = Session::replay("s1", session_request_from_json(snap["request"]),
                                    f.city.network, f.city.assets, history);
  EXPECT_EQ(to_json(r.route()).dump(), to_json(s.route()).dump());
  EXPECT_EQ(r.export_route(ExportFormat::gpx), s.export_route(ExportFormat::gpx));
}
