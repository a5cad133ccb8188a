#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/buffer.hpp"
#include "recon/errors.hpp"
#include "recon/transect.hpp"

using namespace recon;

namespace {

// Depot 0 at the origin with four spokes of 100, 200, 300 and 400 m, and an
// asset at each tip. Zero U-turn penalty, 0.1 s per meter.
struct Star {
  std::shared_ptr<const RoadNetwork> net;
  std::vector<Asset> assets;
  SolverConfig config;
  RoutableGraph graph;

  Star()
      : net(testkit::planar_network({{0, 0}, {100, 0}, {0, 200}, {-300, 0}, {0, -400}},
                                    {{0, 1}, {0, 2}, {0, 3}, {0, 4}})),
        config(make_config()),
        graph(build_graph(net, config)) {
    assets = {testkit::asset_at(*net, "a1", {100, 5}), testkit::asset_at(*net, "a2", {5, 200}),
              testkit::asset_at(*net, "a3", {-300, 5}), testkit::asset_at(*net, "a4", {5, -400})};
  }

  static SolverConfig make_config() {
    SolverConfig c = testkit::tenth_second_config();
    c.turn = TurnModel::penalty(0);
    c.buffer_m = 10;
    return c;
  }

  TransectProblem problem(double budget) const {
    TransectProblem p;
    p.depot = 0;
    p.budget_s = budget;
    for (NodeId n = 1; n <= 4; ++n) p.candidates.push_back({"a" + std::to_string(n), n});
    return p;
  }
};

}  // namespace

TEST(Transect, EveryStopFitsUnderGenerousBudget) {
  const Star s;
  const auto sol = solve_transect(s.problem(1000), s.graph, s.config, s.assets);
  EXPECT_TRUE(sol.dropped.empty());
  EXPECT_EQ(sol.visited.size(), 4u);
  EXPECT_NEAR(sol.route.total_time_s(), 200.0, 1e-6);
  EXPECT_EQ(sol.route.start(), 0u);
  EXPECT_EQ(sol.route.end(), 0u);
  EXPECT_EQ(sol.route.waypoints().front().kind, WaypointKind::DEPOT);
  EXPECT_EQ(sol.route.waypoints().back().kind, WaypointKind::DEPOT);
}

TEST(Transect, BudgetBetweenThreeAndFourStopToursDropsExactlyOne) {
  const Star s;
  // Best four-stop tour 200 s; best three-stop tour 120 s.
  const auto sol = solve_transect(s.problem(150), s.graph, s.config, s.assets);
  ASSERT_EQ(sol.dropped.size(), 1u);
  EXPECT_EQ(sol.dropped[0].ref, "a4");
  EXPECT_EQ(sol.dropped[0].reason, DropReason::BUDGET);
  EXPECT_LE(sol.route.total_time_s(), 150.0);
  EXPECT_EQ(sol.visited.size(), 3u);
}

TEST(Transect, LockedStopIsNeverTrimmed) {
  const Star s;
  auto p = s.problem(100);
  p.candidates[3].locked = true;
  const auto sol = solve_transect(p, s.graph, s.config, s.assets);
  EXPECT_NE(std::find(sol.visited.begin(), sol.visited.end(), "a4"), sol.visited.end());
  EXPECT_LE(sol.route.total_time_s(), 100.0);
  bool locked_kind = false;
  for (const auto& w : sol.route.waypoints()) locked_kind |= w.ref == "a4" && w.kind == WaypointKind::LOCKED;
  EXPECT_TRUE(locked_kind);
}

TEST(Transect, LockedStopsOverBudgetAreAConstraintError) {
  const Star s;
  auto p = s.problem(50);
  p.candidates[3].locked = true;
  EXPECT_THROW(solve_transect(p, s.graph, s.config, s.assets), ConstraintError);
}

TEST(Transect, UnreachableStopsAreReportedNotFatal) {
  const auto net = testkit::planar_network(
      {{0, 0}, {100, 0}, {200, 0}, {500, 500}, {600, 500}},
      {{0, 1}, {1, 2, RoadClass::residential, true}, {3, 4}});
  const auto g = build_graph(net, testkit::tenth_second_config());
  TransectProblem p;
  p.depot = 0;
  p.budget_s = 1000;
  p.candidates = {{"near", 1}, {"oneway", 2}, {"island", 4}};
  const auto sol = solve_transect(p, g, testkit::tenth_second_config(), {});
  ASSERT_EQ(sol.dropped.size(), 2u);
  EXPECT_EQ(sol.dropped[0].reason, DropReason::UNREACHABLE);
  EXPECT_EQ(sol.dropped[1].reason, DropReason::UNREACHABLE);
  EXPECT_EQ(sol.visited, (std::vector<std::string>{"near"}));
  p.candidates[2].locked = true;
  EXPECT_THROW(solve_transect(p, g, testkit::tenth_second_config(), {}), ConstraintError);
}

TEST(Transect, OpenTourEndsAtLastStop) {
  const Star s;
  auto p = s.problem(1000);
  p.closed_tour = false;
  const auto sol = solve_transect(p, s.graph, s.config, s.assets);
  // Leaving the longest spoke for last saves its return leg.
  EXPECT_NEAR(sol.route.total_time_s(), 160.0, 1e-6);
  EXPECT_EQ(sol.route.end(), 4u);
}

TEST(Transect, SharedNodeCandidatesVisitTogether) {
  const Star s;
  auto p = s.problem(1000);
  p.candidates.push_back({"twin", 2});
  const auto sol = solve_transect(p, s.graph, s.config, s.assets);
  std::size_t pos_a2 = 0, pos_twin = 1;
  for (const auto& w : sol.route.waypoints()) {
    if (w.ref == "a2") pos_a2 = w.position;
    if (w.ref == "twin") pos_twin = w.position;
  }
  EXPECT_EQ(pos_a2, pos_twin);
}

TEST(Transect, OpportunisticExcludesVisited) {
  const auto city = testkit::make_grid_city();
  const auto g = build_graph(city.network, {});
  const std::vector<std::string> types{"library"};
  const auto p = make_transect_problem(*city.network, city.assets, types,
                                       testkit::grid_node(*city.network, 10, 10), 4 * 3600.0);
  const auto sol = solve_transect(p, g, {}, city.assets);
  for (const auto& v : sol.visited) EXPECT_FALSE(sol.opportunistic.contains(v));
  const auto counts = count_onroute_capitals(sol.route, g, city.assets, kDefaultBufferM);
  std::size_t total = 0;
  for (const auto& c : counts) total += c.visited + c.opportunistic;
  EXPECT_EQ(total, route_coverage(sol.route, g, city.assets, kDefaultBufferM).size());
}

TEST(Transect, SnapGoesToNearerEndpointOfNearestEdge) {
  const auto net = testkit::planar_network({{0, 0}, {100, 0}}, {{0, 1}});
  const EdgeIndex index(*net);
  EXPECT_EQ(snap_asset(*net, index, testkit::asset_at(*net, "x", {30, 40})), 0u);
  EXPECT_EQ(snap_asset(*net, index, testkit::asset_at(*net, "y", {70, -40})), 1u);
}

TEST(Transect, SeedClassesCoverTargetFraction) {
  const auto city = testkit::make_grid_city();
  const auto types = select_seed_classes(city.assets, *city.network, 500, 0.8);
  ASSERT_FALSE(types.empty());
  const Rect box = city.network->bounds();
  std::set<std::pair<long long, long long>> all, got;
  const std::set<std::string> chosen(types.begin(), types.end());
  for (const auto& a : city.assets) {
    const Vec2 p = city.network->projection().forward(a.location);
    const std::pair<long long, long long> c{static_cast<long long>(std::floor((p.x - box.min_x) / 500)),
                                            static_cast<long long>(std::floor((p.y - box.min_y) / 500))};
    all.insert(c);
    if (chosen.contains(a.component_type)) got.insert(c);
  }
  EXPECT_GE(static_cast<double>(got.size()), 0.8 * static_cast<double>(all.size()));
}

TEST(Transect, DeterministicAcrossRuns) {
  const auto city = testkit::make_grid_city();
  const auto g = build_graph(city.network, {});
  const std::vector<std::string> types{"park", "hospital"};
  const auto p = make_transect_problem(*city.network, city.assets, types,
                                       testkit::grid_node(*city.network, 2, 2), 1800.0);
  const auto a = solve_transect(p, g, {}, city.assets);
  const auto b = solve_transect(p, g, {}, city.assets);
  EXPECT_EQ(a.route, b.route);
  EXPECT_EQ(a.dropped, b.dropped);
  EXPECT_LE(a.route.total_time_s(), 1800.0);
}
