#include <gtest/gtest.h>

#include <random>

#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/errors.hpp"
#include "recon/income.hpp"

using namespace recon;

TEST(Jenks, TwoObviousClusters) {
  const std::vector<double> v{1, 2, 3, 100, 101, 102};
  const auto r = jenks_breaks(v, 2);
  ASSERT_EQ(r.breaks.size(), 1u);
  EXPECT_EQ(r.breaks[0], 3.0);
  EXPECT_EQ(r.classes, (std::vector<int>{0, 0, 0, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(r.ssd, 4.0);
  EXPECT_NEAR(r.gvf, 1.0 - r.ssd / r.total_ssd, 1e-15);
}

TEST(Jenks, ClassesFollowInputOrder) {
  const std::vector<double> v{50, 1, 49, 2};
  const auto r = jenks_breaks(v, 2);
  EXPECT_EQ(r.classes, (std::vector<int>{1, 0, 1, 0}));
}

TEST(Jenks, EqualValuesNeverSplit) {
  const std::vector<double> v{5, 5, 5, 5, 6};
  const auto r = jenks_breaks(v, 2);
  EXPECT_EQ(r.breaks, (std::vector<double>{5}));
  EXPECT_THROW(jenks_breaks(v, 3), DomainError);
}

TEST(Jenks, DomainErrors) {
  const std::vector<double> empty;
  const std::vector<double> v{1, 2, 3};
  const std::vector<double> nan{1, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(jenks_breaks(empty, 1), DomainError);
  EXPECT_THROW(jenks_breaks(v, 0), DomainError);
  EXPECT_THROW(jenks_breaks(v, 4), DomainError);
  EXPECT_THROW(jenks_breaks(nan, 1), DomainError);
}

TEST(Jenks, KEqualsDistinctGivesZeroSsd) {
  const std::vector<double> v{3, 1, 2, 2};
  const auto r = jenks_breaks(v, 3);
  EXPECT_EQ(r.ssd, 0.0);
  EXPECT_EQ(r.breaks, (std::vector<double>{1, 2}));
}

TEST(Jenks, MatchesExhaustiveOnRandomSmallSets) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + rng() % 8;
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(static_cast<double>(rng() % 40));
    std::set<double> distinct(v.begin(), v.end());
    const int k = 1 + static_cast<int>(rng() % std::min<std::size_t>(4, distinct.size()));
    const auto got = jenks_breaks(v, k);
    const auto want = oracle::jenks_exhaustive(v, k);
    EXPECT_EQ(got.breaks, want.breaks);
    EXPECT_EQ(got.ssd, want.ssd);
  }
}

TEST(ClassifyBlockGroups, NullIncomeStaysUnlabelled) {
  auto city = testkit::make_grid_city();
  city.groups[3].median_income.reset();
  const auto r = classify_block_groups(city.groups, 5);
  EXPECT_EQ(r.classes.size(), 24u);
  EXPECT_FALSE(city.groups[3].cluster_label);
  EXPECT_TRUE(city.groups[4].cluster_label);
}

TEST(CanvasAreas, UniformAreaScoresZero) {
  auto city = testkit::make_grid_city();
  classify_block_groups(city.groups, 5);
  const Projection& proj = city.network->projection();
  // One block group's interior: a single class.
  const Vec2 a = proj.forward(testkit::grid_point(0.5, 0.5));
  const Vec2 b = proj.forward(testkit::grid_point(3.5, 3.5));
  EXPECT_EQ(score_canvas_area(Rect{a.x, a.y, b.x, b.y}, city.groups, proj), 0.0);
  // Straddling the boundary between two income rows half and half.
  const Vec2 c = proj.forward(testkit::grid_point(0.5, 2.0));
  const Vec2 d = proj.forward(testkit::grid_point(3.5, 6.0));
  EXPECT_NEAR(score_canvas_area(Rect{c.x, c.y, d.x, d.y}, city.groups, proj), std::log(2.0), 1e-9);
}

TEST(CanvasAreas, EmptyAreaThrows) {
  auto city = testkit::make_grid_city();
  classify_block_groups(city.groups, 5);
  const Rect far{1e5, 1e5, 1e5 + 100, 1e5 + 100};
  EXPECT_THROW(score_canvas_area(far, city.groups, city.network->projection()), EmptyAreaError);
}

TEST(CanvasAreas, RankedBySpreadThenIntersections) {
  auto city = testkit::make_grid_city();
  classify_block_groups(city.groups, 5);
  const auto areas = rank_candidate_areas(city.groups, *city.network, 600, 300);
  ASSERT_FALSE(areas.empty());
  for (std::size_t i = 1; i < areas.size(); ++i) {
    const auto& p = areas[i - 1];
    const auto& q = areas[i];
    EXPECT_TRUE(p.spread_score > q.spread_score ||
                (p.spread_score == q.spread_score && p.intersection_count >= q.intersection_count));
  }
  for (const auto& a : areas) {
    EXPECT_EQ(a.intersection_count,
              oracle::intersections_inside(*city.network, a.rect.ring(), 3).size());
  }
}
