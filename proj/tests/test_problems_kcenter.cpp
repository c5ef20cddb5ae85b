#include <gtest/gtest.h>

#include <random>

#include "netprune/oracle.hpp"
#include "netprune/problems/kcenter.hpp"
#include "support.hpp"

using namespace netprune;

namespace {

PointSet two_far_points() {
  PointSet p(2);
  p.push_back({0.0, 0.0});
  p.push_back({10.0, 0.0});
  return p;
}

}  // namespace

TEST(KCenterDecider, TwoPoints) {
  const KCenterProblem problem(1.0);
  const PointSet p = two_far_points();
  EXPECT_TRUE(problem.decide(3.0, NdpInstance<KCenterContext>{p, {1}}).is_above());
  EXPECT_TRUE(problem.decide(12.0, NdpInstance<KCenterContext>{p, {1}}).is_below());
  EXPECT_TRUE(problem.is_zero(NdpInstance<KCenterContext>{p, {2}}));
}

TEST(KCenterDecider, SoundOnSmallSets) {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet p = testing_support::random_points(rng, 9, 2);
    for (std::uint64_t k = 1; k < 4; ++k) {
      const double opt = oracle::kcenter(p, k);
      const KCenterProblem problem(0.5);
      for (double r : {opt / 5, opt / 2, opt * (1 - 1e-9), opt * (1 + 1e-9), 1.5 * opt, 3 * opt}) {
        const auto out = problem.decide(r, NdpInstance<KCenterContext>{p, {k}});
        if (out.is_below()) EXPECT_LT(opt, r);
        if (out.is_above()) EXPECT_GT(opt, r);
        if (out.is_bounded()) {
          EXPECT_LE(out.lo, opt);
          EXPECT_GE(out.hi, opt);
        }
      }
    }
  }
}

TEST(KCenter, TwoTightClusters) {
  PointSet p(2);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 0.07);
  for (int i = 0; i < 6; ++i) p.push_back({u(rng), u(rng)});
  for (int i = 0; i < 6; ++i) p.push_back({100.0 + u(rng), u(rng)});
  const auto s = kcenter_2approx(p, 2);
  EXPECT_LE(s.radius, 0.2);
  EXPECT_EQ(s.centers.size(), 2u);
  EXPECT_NEAR(covering_radius(p, s.centers), s.radius, 1e-12);
}

TEST(KCenter, EnoughCentersMeansZero) {
  std::mt19937_64 rng(32);
  const PointSet p = testing_support::random_points(rng, 10, 2);
  const auto s = kcenter_2approx(p, 10);
  EXPECT_EQ(s.radius, 0.0);
  EXPECT_TRUE(s.run.zero);
  EXPECT_EQ(s.centers.size(), 10u);
}

TEST(KCenter, LineWithinFactorTwo) {
  PointSet p(1);
  for (int i = 0; i < 10; ++i) p.push_back({double(i)});
  // Centers are input points, so one of the three groups holds four points.
  const double opt = oracle::kcenter(p, 3);
  EXPECT_DOUBLE_EQ(opt, 2.0);
  const auto s = kcenter_2approx(p, 3);
  EXPECT_GE(s.radius, opt);
  EXPECT_LE(s.radius, 2 * opt);
  EXPECT_TRUE(s.interval.contains(opt));
}

TEST(KCenter, RandomAllK) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const PointSet p = testing_support::random_points(rng, 11, 1 + trial % 3);
    for (std::uint64_t k = 1; k < p.size(); ++k) {
      const double opt = oracle::kcenter(p, k);
      SolveOptions o;
      o.seed = trial * 100 + k;
      const auto s = kcenter_2approx(p, k, o);
      EXPECT_GE(s.radius, opt * (1 - 1e-12));
      EXPECT_LE(s.radius, 2 * opt * (1 + 1e-12));
      EXPECT_TRUE(s.interval.contains(opt));
    }
  }
}

TEST(KCenter, RejectsZeroK) { EXPECT_THROW(kcenter_2approx(two_far_points(), 0), InputError); }

TEST(KCenter, OneCenterShortTerminates) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const PointSet p = testing_support::random_points(rng, 2 + trial % 12, 1 + trial % 3);
    const std::uint64_t k = p.size() - 1;
    SolveOptions o;
    o.seed = trial;
    const auto s = kcenter_2approx(p, k, o);
    EXPECT_TRUE(s.interval.contains(oracle::kcenter(p, k)));
  }
}
