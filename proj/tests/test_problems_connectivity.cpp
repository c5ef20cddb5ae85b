#include <gtest/gtest.h>

#include <random>

#include "netprune/oracle.hpp"
#include "netprune/problems/connectivity.hpp"
#include "support.hpp"

using namespace netprune;
using testing_support::line;

TEST(Connectivity, WellSeparatedGroups) {
  const Partition part = connectivity_partition(line({0.0, 0.4, 5.0}), 1.0, 0.1);
  ASSERT_EQ(part.cluster_count, 2u);
  EXPECT_EQ(part.cluster_of[0], part.cluster_of[1]);
  EXPECT_NE(part.cluster_of[0], part.cluster_of[2]);
}

TEST(Connectivity, SinglePoint) {
  const Partition part = connectivity_partition(line({3.0}), 1.0, 0.5);
  EXPECT_EQ(part.cluster_count, 1u);
  EXPECT_EQ(part.clusters().front(), std::vector<std::size_t>{0});
}

TEST(Connectivity, SandwichedBetweenThresholdGraphs) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> radius(0.01, 0.3);
  for (int trial = 0; trial < 40; ++trial) {
    const PointSet p = testing_support::random_points(rng, 100, 1 + trial % 3);
    for (double eps : {0.05, 0.5, 1.0}) {
      const double r = radius(rng);
      const Partition got = connectivity_partition(p, r, eps);
      EXPECT_TRUE(oracle::refines(oracle::threshold_components(p, r), got));
      EXPECT_TRUE(oracle::refines(got, oracle::threshold_components(p, (1 + eps) * r)));
    }
  }
}

TEST(Connectivity, RefinesChecksBothWays) {
  const Partition fine = oracle::threshold_components(line({0.0, 1.0, 3.0}), 1.0);
  const Partition coarse = oracle::threshold_components(line({0.0, 1.0, 3.0}), 2.0);
  EXPECT_TRUE(oracle::refines(fine, coarse));
  EXPECT_FALSE(oracle::refines(coarse, fine));
}

TEST(MstKthEdge, LineExample) {
  const PointSet p = line({0.0, 1.0, 2.0, 10.0});
  EXPECT_EQ(oracle::mst_kth_edge(p, 1, false), 8.0);
  EXPECT_EQ(oracle::mst_kth_edge(p, 1, true), 1.0);
  SolveOptions o;
  o.eps = 0.1;
  const Solution s = solve_mst_kth_edge(p, 1, false, o);
  EXPECT_GE(s.value, 8.0);
  EXPECT_LE(s.value, 8.8);
}

TEST(MstKthEdge, TwoPoints) {
  const Solution s = solve_mst_kth_edge(line({0.0, 2.5}), 1, false);
  EXPECT_GE(s.value, 2.5);
  EXPECT_LE(s.value, 2.5 * 1.1);
  EXPECT_THROW(solve_mst_kth_edge(line({0.0, 2.5}), 2, false), InfeasibleError);
}

TEST(MstKthEdge, AllRanksWithinEps) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 3; ++trial) {
    const PointSet p = testing_support::random_points(rng, 60, 2);
    const auto edges = oracle::mst_edges(p);
    for (std::uint64_t k = 1; k <= edges.size(); ++k) {
      SolveOptions o;
      o.eps = 0.1;
      o.seed = k;
      const double truth = oracle::mst_kth_edge(p, k, false);
      const Solution s = solve_mst_kth_edge(p, k, false, o);
      EXPECT_GE(s.value, truth * (1 - 1e-12));
      EXPECT_LE(s.value, truth * 1.1 * (1 + 1e-12));
    }
  }
}

TEST(MstKthEdge, DuplicatesGiveZeroEdges) {
  const PointSet p = line({0.0, 0.0, 0.0, 4.0});
  EXPECT_EQ(oracle::mst_edges(p), (std::vector<double>{0.0, 0.0, 4.0}));
  EXPECT_TRUE(solve_mst_kth_edge(p, 2, false).zero);
  EXPECT_GE(solve_mst_kth_edge(p, 1, true).value, 0.0);
  EXPECT_GE(solve_mst_kth_edge(p, 3, true).value, 4.0);
}
