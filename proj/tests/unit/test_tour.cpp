#include <gtest/gtest.h>

#include <random>

#include "grid_city.hpp"
#include "oracles.hpp"
#include "recon/tour.hpp"

using namespace recon;

namespace {

TimeMatrix random_matrix(std::size_t n, std::mt19937_64& rng, bool symmetric) {
  TimeMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (symmetric && j < i) {
        m(i, j) = m(j, i);
      } else {
        m(i, j) = 10.0 + testkit::unit(rng()) * 90.0;
      }
    }
  }
  return m;
}

}  // namespace

TEST(Tour, SequenceCostSumsLegs) {
  TimeMatrix m(3);
  m(0, 1) = 2;
  m(1, 2) = 3;
  m(2, 0) = 7;
  const std::vector<std::size_t> seq{0, 1, 2, 0};
  EXPECT_DOUBLE_EQ(sequence_cost(m, seq), 12.0);
  m(1, 2) = kInfeasible;
  EXPECT_EQ(sequence_cost(m, seq), kInfeasible);
}

TEST(Tour, NearestNeighbourBreaksTiesByListOrder) {
  TimeMatrix m(4, 5.0);
  const std::vector<std::size_t> visit{2, 1};
  EXPECT_EQ(nearest_neighbor_order(m, 0, visit, 3), (std::vector<std::size_t>{0, 2, 1, 3}));
}

TEST(Tour, ImproveKeepsEndpointsAndPermutation) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng() % 7;
    const auto m = random_matrix(n, rng, t % 2 == 0);
    std::vector<std::size_t> seq(n);
    std::iota(seq.begin(), seq.end(), 0);
    seq.push_back(0);
    const double before = sequence_cost(m, seq);
    improve_order(m, seq, 100000);
    EXPECT_EQ(seq.front(), 0u);
    EXPECT_EQ(seq.back(), 0u);
    EXPECT_LE(sequence_cost(m, seq), before + 1e-9);
    std::vector<std::size_t> inner(seq.begin() + 1, seq.end() - 1);
    std::sort(inner.begin(), inner.end());
    for (std::size_t i = 0; i < inner.size(); ++i) EXPECT_EQ(inner[i], i + 1);
  }
}

TEST(Tour, ImprovedOrderIsLocallyOptimal) {
  // No single 2-opt reversal can still improve the result.
  std::mt19937_64 rng(17);
  const auto m = random_matrix(9, rng, false);
  std::vector<std::size_t> seq{0, 1, 2, 3, 4, 5, 6, 7, 8, 0};
  improve_order(m, seq, 100000);
  const double c = sequence_cost(m, seq);
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    for (std::size_t j = i + 1; j + 1 < seq.size(); ++j) {
      auto alt = seq;
      std::reverse(alt.begin() + static_cast<long>(i), alt.begin() + static_cast<long>(j) + 1);
      EXPECT_GE(sequence_cost(m, alt), c - 1e-9);
    }
  }
}

TEST(Tour, MoveLimitZeroLeavesOrder) {
  std::mt19937_64 rng(1);
  const auto m = random_matrix(6, rng, true);
  std::vector<std::size_t> seq{0, 5, 4, 3, 2, 1, 0};
  const auto copy = seq;
  EXPECT_EQ(improve_order(m, seq, 0), 0u);
  EXPECT_EQ(seq, copy);
}

TEST(Tour, CheapestInsertionPicksBestSlot) {
  TimeMatrix m(4, 100.0);
  m(0, 1) = 1;
  m(1, 3) = 1;
  m(0, 2) = 1;
  m(2, 1) = 1;
  std::vector<std::size_t> seq{0, 1, 3};
  const std::vector<std::size_t> ins{2};
  cheapest_insertion(m, seq, ins);
  EXPECT_EQ(seq, (std::vector<std::size_t>{0, 2, 1, 3}));
}

TEST(Tour, WithinFifteenPercentOnSmallInstances) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 5 + rng() % 4;
    const auto m = random_matrix(n, rng, t % 3 != 0);
    std::vector<std::size_t> visit(n - 1);
    std::iota(visit.begin(), visit.end(), 1);
    auto seq = nearest_neighbor_order(m, 0, visit, 0);
    improve_order(m, seq, 100000);
    const double opt = oracle::best_order_cost(m, 0, visit, 0);
    EXPECT_LE(sequence_cost(m, seq), 1.15 * opt + 1e-9);
  }
}
