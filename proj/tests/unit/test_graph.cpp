#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/errors.hpp"
#include "recon/graph.hpp"

using namespace recon;
using testkit::EdgeSpec;
using testkit::planar_network;

namespace {

// 0 -- 1 -- 2, with a dead end 1 -- 3. Every edge is 100 m.
std::shared_ptr<const RoadNetwork> tee() {
  return planar_network({{0, 0}, {100, 0}, {200, 0}, {100, 100}},
                        {{0, 1}, {1, 2}, {1, 3}});
}

}  // namespace

TEST(Graph, ArcsOrderedByEdgeForwardFirst) {
  const auto g = build_graph(tee(), testkit::tenth_second_config());
  ASSERT_EQ(g.arc_count(), 6u);
  EXPECT_EQ(g.arc(0).edge, 0u);
  EXPECT_TRUE(g.arc(0).forward);
  EXPECT_FALSE(g.arc(1).forward);
  EXPECT_EQ(g.reverse(0), 1u);
  EXPECT_NEAR(g.arc(2).travel_time_s, 10.0, 1e-6);
}

TEST(Graph, OnewayHasNoTwin) {
  const auto net = planar_network({{0, 0}, {100, 0}}, {{0, 1, RoadClass::residential, true}});
  const auto g = build_graph(net, {});
  ASSERT_EQ(g.arc_count(), 1u);
  EXPECT_EQ(g.reverse(0), kNoArc);
  EXPECT_THROW(shortest_path(g, TurnModel{}, 1, 0), NoPathError);
}

TEST(Graph, MissingSpeedIsConfigError) {
  SolverConfig c;
  c.speed_mps[static_cast<std::size_t>(RoadClass::residential)].reset();
  EXPECT_THROW(build_graph(tee(), c), ConfigError);
  c = {};
  c.speed_mps[static_cast<std::size_t>(RoadClass::motorway)].reset();
  EXPECT_NO_THROW(build_graph(tee(), c));  // class absent from the data
}

TEST(Graph, TrafficMultiplierScalesTimes) {
  SolverConfig c = testkit::tenth_second_config();
  c.traffic_multiplier = 1.5;
  const auto g = build_graph(tee(), c);
  EXPECT_NEAR(shortest_path(g, c.turn, 0, 2).total_time_s, 30.0, 1e-6);
}

TEST(ShortestPath, SeamPenaltyAppliesToArrivalArc) {
  const auto g = build_graph(tee(), testkit::tenth_second_config());
  const TurnModel turn = TurnModel::penalty(120);
  // Arrived at 3 from 1; going back to 1 is a reversal.
  const ArcId into3 = g.arc_for(2, true);
  const auto r = shortest_path(g, turn, PathQuery{3, 1, into3, kNoArc});
  EXPECT_NEAR(r.total_time_s, 130.0, 1e-6);
  EXPECT_THROW(shortest_path(g, TurnModel::prohibited(), PathQuery{3, 1, into3, kNoArc}),
               NoPathError);
}

TEST(ShortestPath, DepartureArcPricesFinalSeam) {
  const auto g = build_graph(tee(), testkit::tenth_second_config());
  // Reach 1 then leave on 1->0: arriving along 0->1 would force a reversal.
  const ArcId leave = g.arc_for(0, false);
  const auto r = shortest_path(g, TurnModel::penalty(120), PathQuery{0, 1, kNoArc, leave});
  EXPECT_NEAR(r.total_time_s, 130.0, 1e-6);
}

TEST(ShortestPath, RemovedEdgesAreImpassable) {
  const auto net = tee();
  const std::vector<EdgeId> removed{1};
  const auto g = build_graph(net, {}, removed);
  EXPECT_FALSE(g.has_edge(1));
  EXPECT_THROW(shortest_path(g, TurnModel{}, 0, 2), NoPathError);
}

TEST(ShortestPath, TreeAgreesWithPointQueries) {
  const auto city = testkit::make_grid_city();
  const auto g = build_graph(city.network, {});
  const TurnModel turn = TurnModel::penalty(120);
  const NodeId src = testkit::grid_node(*city.network, 3, 7);
  const ShortestPathTree tree(g, turn, src);
  for (NodeId n = 0; n < g.node_count(); n += 37) {
    EXPECT_NEAR(tree.time_to(n), shortest_path(g, turn, src, n).total_time_s, 1e-9);
    double sum = 0.0;
    for (ArcId a : tree.path_to(n)) sum += g.arc(a).travel_time_s;
    EXPECT_NEAR(sum, tree.time_to(n), 1e-9);
  }
}

TEST(ShortestPath, MatchesWalkEnumerationOnSmallRandomGraphs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({testkit::unit(rng()) * 500, testkit::unit(rng()) * 500});
    std::vector<EdgeSpec> edges;
    for (NodeId i = 1; i < 6; ++i) edges.push_back({static_cast<NodeId>(rng() % i), i});
    for (int extra = 0; extra < 3; ++extra) {
      NodeId a = rng() % 6, b = rng() % 6;
      if (a != b) edges.push_back({a, b, RoadClass::primary, rng() % 2 == 0});
    }
    const auto net = planar_network(pts, edges);
    const SolverConfig c;
    const auto g = build_graph(net, c);
    const auto arcs = oracle::arcs_from_network(*net, c);
    for (std::optional<double> pen : {std::optional<double>(0.0), std::optional<double>(120.0),
                                      std::optional<double>()}) {
      const TurnModel turn = pen ? TurnModel::penalty(*pen) : TurnModel::prohibited();
      for (NodeId s = 0; s < 6; ++s) {
        for (NodeId t = 0; t < 6; ++t) {
          const auto want = oracle::min_walk_time(arcs, s, t, pen);
          if (!want) {
            EXPECT_THROW(shortest_path(g, turn, s, t), NoPathError);
          } else {
            EXPECT_NEAR(shortest_path(g, turn, s, t).total_time_s, *want, 1e-9);
          }
        }
      }
    }
  }
}

TEST(TimeMatrixTest, DiagonalZeroAndUnreachableInfinite) {
  const auto net = planar_network({{0, 0}, {100, 0}, {200, 0}},
                                  {{0, 1}, {1, 2, RoadClass::residential, true}});
  const auto g = build_graph(net, testkit::tenth_second_config());
  const std::vector<NodeId> w{0, 1, 2};
  const auto m = pairwise_matrix(g, TurnModel{}, w);
  EXPECT_EQ(m(1, 1), 0.0);
  EXPECT_NEAR(m(0, 2), 20.0, 1e-6);
  EXPECT_EQ(m(2, 0), kInfeasible);
}

TEST(TurnModelTest, RejectsNegativePenalty) {
  EXPECT_THROW(TurnModel::penalty(-1), ConfigError);
  EXPECT_TRUE(TurnModel::prohibited().is_prohibited());
  EXPECT_DOUBLE_EQ(TurnModel{}.penalty_s(), kDefaultUTurnPenaltyS);
}
