#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/buffer.hpp"
#include "recon/route.hpp"

using namespace recon;

TEST(EdgeIndexTest, NearestMatchesBruteForce) {
  const auto city = testkit::make_grid_city();
  const RoadNetwork& net = *city.network;
  const EdgeIndex index(net);
  std::mt19937_64 rng(3);
  const Rect b = net.bounds();
  for (int i = 0; i < 300; ++i) {
    const Vec2 p{b.min_x - 200 + testkit::unit(rng()) * (b.width() + 400),
                 b.min_y - 200 + testkit::unit(rng()) * (b.height() + 400)};
    double best = 1e300;
    for (const auto& e : net.edges()) best = std::min(best, point_to_polyline(p, e.shape).distance_m);
    const auto hit = index.nearest(p);
    EXPECT_DOUBLE_EQ(hit.projection.distance_m, best);
    std::vector<EdgeId> want;
    for (const auto& e : net.edges()) {
      if (point_to_polyline(p, e.shape).distance_m <= 90.0) want.push_back(e.id);
    }
    EXPECT_EQ(index.within(p, 90.0), want);
  }
}

TEST(Associate, BufferBoundaryIsInclusive) {
  const auto net = testkit::planar_network({{0, 0}, {100, 0}}, {{0, 1}});
  std::vector<Asset> assets{testkit::asset_at(*net, "in", {50, 20}),
                            testkit::asset_at(*net, "out", {50, 21})};
  const auto assoc = associate_assets(assets, *net, 20.0 + 1e-9);
  ASSERT_EQ(assoc.size(), 2u);
  EXPECT_TRUE(assoc[0].within_buffer);
  EXPECT_FALSE(assoc[1].within_buffer);
  EXPECT_NEAR(assoc[0].distance_m, 20.0, 1e-6);
}

TEST(Associate, ExcludedAssetsAreSkipped) {
  const auto net = testkit::planar_network({{0, 0}, {100, 0}}, {{0, 1}});
  std::vector<Asset> assets{testkit::asset_at(*net, "a", {50, 5}),
                            testkit::asset_at(*net, "b", {50, 5})};
  assets[1].excluded = true;
  EXPECT_EQ(associate_assets(assets, *net, 60).size(), 1u);
  const AssetCoverage cov(*net, assets, 60);
  EXPECT_EQ(cov.near_edge(0).size(), 1u);
}

TEST(RouteCoverage, EqualsBruteForceOverTraversedEdges) {
  const auto city = testkit::make_grid_city();
  const auto g = build_graph(city.network, {});
  const TurnModel turn;
  const std::vector<NodeId> stops{testkit::grid_node(*city.network, 0, 0),
                                  testkit::grid_node(*city.network, 12, 5),
                                  testkit::grid_node(*city.network, 4, 18)};
  const auto arcs = expand_stops(g, turn, stops);
  const Route r = Route::make(g, turn, stops.front(), arcs, {});
  std::set<EdgeId> edges;
  for (ArcId a : arcs) edges.insert(g.arc(a).edge);
  EXPECT_EQ(route_coverage(r, g, city.assets, kDefaultBufferM),
            oracle::covered_assets(*city.network, city.assets, edges, kDefaultBufferM));
}
