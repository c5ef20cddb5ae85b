#include <gtest/gtest.h>

#include <random>
#include <set>

#include "netprune/nets.hpp"
#include "support.hpp"

using namespace netprune;

namespace {

// Packing and covering checked pair by pair.
void expect_valid_net(const PointSet& p, const NetResult& net, double r) {
  for (std::size_t a = 0; a < net.net.size(); ++a) {
    for (std::size_t b = a + 1; b < net.net.size(); ++b) {
      EXPECT_GE(distance(net.net.point(a), net.net.point(b)), r);
    }
  }
  std::vector<std::uint64_t> w(net.net.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    ASSERT_LT(net.assignment[i], net.net.size());
    EXPECT_LT(distance(p.point(i), net.net.point(net.assignment[i])), r);
    w[net.assignment[i]] += p.weight(i);
  }
  for (std::size_t c = 0; c < net.net.size(); ++c) {
    EXPECT_EQ(net.net.weight(c), w[c]);
    EXPECT_EQ(distance(net.net.point(c), p.point(net.centers[c])), 0.0);
  }
  EXPECT_EQ(net.net.total_weight(), p.total_weight());
}

std::vector<std::size_t> brute_close(const PointSet& p, double r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool close = p.weight(i) >= 2;
    for (std::size_t j = 0; j < p.size() && !close; ++j) {
      if (j != i && distance(p.point(i), p.point(j)) < r) close = true;
    }
    if (close) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST(Net, Singleton) {
  PointSet p(2);
  p.push_back({0.0, 0.0});
  const NetResult net = compute_net(p, 1.0);
  ASSERT_EQ(net.net.size(), 1u);
  EXPECT_EQ(net.net.weight(0), 1u);
  EXPECT_EQ(net.assignment, std::vector<std::size_t>{0});
}

TEST(Net, AbsorbsWeight) {
  PointSet p(2);
  p.push_back({0.0, 0.0}, 1);
  p.push_back({0.5, 0.0}, 2);
  const NetResult net = compute_net(p, 1.0);
  ASSERT_EQ(net.net.size(), 1u);
  EXPECT_EQ(net.net.point(0)[0], 0.0);
  EXPECT_EQ(net.net.weight(0), 3u);
}

TEST(Net, IntegerGridRowMajor) {
  PointSet p(2);
  for (int y = 0; y <= 2; ++y) {
    for (int x = 0; x <= 2; ++x) p.push_back({double(x), double(y)});
  }
  const NetResult net = compute_net(p, 1.5);
  expect_valid_net(p, net, 1.5);
  std::set<std::pair<double, double>> got;
  for (std::size_t c = 0; c < net.net.size(); ++c) got.insert({net.net.point(c)[0], net.net.point(c)[1]});
  const std::set<std::pair<double, double>> expected{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
  EXPECT_EQ(got, expected);
}

TEST(Net, RandomInstances) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  std::uniform_real_distribution<double> radius(0.01, 0.8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    PointSet p = testing_support::random_points(rng, size(rng), dim);
    const double r = radius(rng);
    expect_valid_net(p, compute_net(p, r), r);
    expect_valid_net(p, compute_net(p, r, true), r);
  }
}

TEST(Net, NearestAssignmentPicksClosestCenter) {
  std::mt19937_64 rng(4);
  const PointSet p = testing_support::random_points(rng, 300, 2);
  const NetResult net = compute_net(p, 0.2, true);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double own = distance(p.point(i), net.net.point(net.assignment[i]));
    for (std::size_t c = 0; c < net.net.size(); ++c) EXPECT_LE(own, distance(p.point(i), net.net.point(c)));
  }
}

TEST(Net, RejectsBadRadius) {
  PointSet p(1);
  p.push_back({0.0});
  EXPECT_THROW(compute_net(p, 0.0), InputError);
  EXPECT_THROW(compute_net(p, -1.0), InputError);
  EXPECT_THROW(compute_net(PointSet(1), 1.0), InputError);
}

TEST(DelFar, AllFar) {
  PointSet p(2);
  p.push_back({0.0, 0.0});
  p.push_back({10.0, 0.0});
  const auto split = del_far(p, 1.0);
  EXPECT_TRUE(split.close.empty());
  EXPECT_EQ(split.far.size(), 2u);
}

TEST(DelFar, PairAndOutlier) {
  PointSet p(2);
  p.push_back({0.0, 0.0});
  p.push_back({0.5, 0.0});
  p.push_back({10.0, 0.0});
  const auto split = del_far(p, 1.0);
  EXPECT_EQ(split.close, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(split.far, (std::vector<std::size_t>{2}));
}

TEST(DelFar, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  const PointSet p = testing_support::random_points(rng, 50, 2, 5.0);
  const auto split = del_far(p, 0.7);
  EXPECT_EQ(split.close, brute_close(p, 0.7));
  EXPECT_EQ(split.close.size() + split.far.size(), p.size());
}

TEST(DelFar, WeightModes) {
  PointSet p(1);
  p.push_back({0.0}, 2);
  p.push_back({5.0}, 1);
  EXPECT_EQ(del_far(p, 1.0, DuplicateMode::Weighted).close, std::vector<std::size_t>{0});
  EXPECT_TRUE(del_far(p, 1.0, DuplicateMode::Collapsed).close.empty());
  PointSet lone(1);
  lone.push_back({0.0}, 1);
  EXPECT_THROW(del_far(lone, 1.0), InputError);
}

TEST(DelFar, ThresholdIsStrict) {
  const PointSet p = testing_support::line({0.0, 1.0});
  EXPECT_TRUE(del_far(p, 1.0).close.empty());
  EXPECT_EQ(del_far(p, std::nextafter(1.0, 2.0)).close.size(), 2u);
}

TEST(Merge, CollapsesCopies) {
  PointSet rows(2);
  rows.push_back({1.0, 0.0});
  rows.push_back({0.0, -0.0}, 2);
  rows.push_back({1.0, 0.0}, 3);
  rows.push_back({0.0, 0.0});
  const MergeResult m = merge_duplicates(rows);
  ASSERT_EQ(m.locations.size(), 2u);
  EXPECT_EQ(m.locations.weight(0), 4u);
  EXPECT_EQ(m.locations.weight(1), 3u);
  EXPECT_EQ(m.group_of_row, (std::vector<std::size_t>{0, 1, 0, 1}));
}
