#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netprune/framework.hpp"
#include "netprune/oracle.hpp"
#include "netprune/problems/kcenter.hpp"
#include "netprune/problems/kth_distance.hpp"
#include "support.hpp"

using namespace netprune;

namespace {

struct Empty {};

// Knows its optimum exactly; lets the driver mechanics be tested in
// isolation from any geometry.
struct FixedValueProblem {
  using Context = Empty;
  double value = 1.0;
  double phi_value = 2.0;
  mutable std::size_t calls = 0;

  double phi() const { return phi_value; }
  DeciderOutcome decide(double r, const NdpInstance<Empty>&) const {
    ++calls;
    if (value < r) return DeciderOutcome::below(r);
    if (value > r) return DeciderOutcome::above(r);
    return DeciderOutcome::bounded(r, r);
  }
  DeciderOutcome decide(double r, const NdpInstance<Empty>& inst, double) const { return decide(r, inst); }
  Empty update_context_on_prune(const NdpInstance<Empty>&, const FarCloseSplit&) const { return {}; }
};

struct MalformedProblem {
  using Context = Empty;
  double phi() const { return 2.0; }
  DeciderOutcome decide(double, const NdpInstance<Empty>&) const { return DeciderOutcome::bounded(2.0, 1.0); }
  Empty update_context_on_prune(const NdpInstance<Empty>&, const FarCloseSplit&) const { return {}; }
};

struct WideProblem {
  using Context = Empty;
  double phi() const { return 2.0; }
  DeciderOutcome decide(double, const NdpInstance<Empty>&) const { return DeciderOutcome::bounded(1.0, 3.0); }
  Empty update_context_on_prune(const NdpInstance<Empty>&, const FarCloseSplit&) const { return {}; }
};

struct AlwaysAbove {
  using Context = Empty;
  double phi() const { return 2.0; }
  DeciderOutcome decide(double r, const NdpInstance<Empty>&) const { return DeciderOutcome::above(r); }
  Empty update_context_on_prune(const NdpInstance<Empty>&, const FarCloseSplit&) const { return {}; }
};

struct Contradictory {
  using Context = Empty;
  double phi() const { return 2.0; }
  DeciderOutcome decide(double r, const NdpInstance<Empty>&) const {
    return r < 1.0 ? DeciderOutcome::below(r) : DeciderOutcome::above(r);
  }
  Empty update_context_on_prune(const NdpInstance<Empty>&, const FarCloseSplit&) const { return {}; }
};

NdpInstance<Empty> toy_instance(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  return {testing_support::random_points(rng, n, 2), {}};
}

}  // namespace

static_assert(EpsDecidable<FixedValueProblem>);
static_assert(HasZeroScreen<KCenterProblem>);

TEST(Driver, KCenterTwoPoints) {
  PointSet p(2);
  p.push_back({0.0, 0.0});
  p.push_back({10.0, 0.0});
  const KCenterProblem problem(1.0);
  const auto run = ndp_solve(problem, NdpInstance<KCenterContext>{p, {1}});
  EXPECT_TRUE(run.interval.contains(10.0)) << run.interval.lo << ' ' << run.interval.hi;
  EXPECT_LE(run.interval.spread(), 4.0 * std::max(problem.phi(), kNetFactor));
}

TEST(Driver, KthDistanceThreePoints) {
  const PointSet p = testing_support::line({0.0, 1.0, 2.0});
  const KthDistanceProblem problem(1.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto run = ndp_solve(problem, NdpInstance<RankContext>{p, {2, 1}}, {seed});
    EXPECT_TRUE(run.interval.contains(1.0));
    EXPECT_LE(run.interval.spread(), 148.0);
  }
}

TEST(Driver, FixedValueContainmentAndSpread) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = toy_instance(seed, 300);
    // A geometric optimum is never below the closest pair unless it is zero.
    const double closest = oracle::closest_pair(inst.points);
    for (double value : {closest, 2.0 * closest, 0.03, 0.5, 7.0}) {
      FixedValueProblem problem;
      problem.value = std::max(value, closest);
      const auto run = ndp_solve(problem, inst, {seed});
      EXPECT_TRUE(run.interval.contains(problem.value));
      EXPECT_LE(run.interval.spread(), 4.0 * kNetFactor * (1 + 1e-12));
    }
  }
}

TEST(Driver, TraceRecordsNetRadiiGrowing) {
  FixedValueProblem problem;
  problem.value = 5.0;
  DriverOptions opts;
  opts.seed = 9;
  opts.record_snapshots = true;
  const auto run = ndp_solve(problem, toy_instance(3, 500), opts);
  const auto& steps = run.trace.steps;
  ASSERT_FALSE(steps.empty());
  EXPECT_EQ(steps.back().action, DriverAction::Return);
  std::size_t changes = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].action != DriverAction::Return) ++changes;
    if (steps[i].action != DriverAction::Net) continue;
    EXPECT_LE(steps[i].nu, problem.value / kNetDecay);
    for (std::size_t j = i + 1; j < steps.size(); ++j) EXPECT_GE(steps[j].nu, 3.0 * steps[i].nu);
  }
  EXPECT_EQ(run.trace.snapshots.size(), changes + 1);
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) EXPECT_EQ(steps[i].size_after, steps[i + 1].size_before);
}

TEST(Driver, CustomSamplerIsUsed) {
  FixedValueProblem problem;
  problem.value = 0.2;
  DriverOptions opts;
  std::size_t calls = 0;
  opts.radius_sampler = [&](const PointSet& p, std::mt19937_64& rng) {
    ++calls;
    return uniform_nn_radius(p, rng);
  };
  const auto run = ndp_solve(problem, toy_instance(1, 100), opts);
  EXPECT_EQ(calls, run.trace.steps.size());
}

TEST(Driver, ContractViolations) {
  EXPECT_THROW(ndp_solve(MalformedProblem{}, toy_instance(1, 10)), ContractError);
  EXPECT_THROW(ndp_solve(WideProblem{}, toy_instance(1, 10)), ContractError);
  EXPECT_THROW(ndp_solve(AlwaysAbove{}, toy_instance(1, 50)), ContractError);
  EXPECT_THROW(ndp_solve(Contradictory{}, NdpInstance<Empty>{testing_support::line({0.0, 0.1}), {}}), ContractError);
}

TEST(Driver, NeedsTwoLocations) {
  FixedValueProblem problem;
  EXPECT_THROW(ndp_solve(problem, NdpInstance<Empty>{testing_support::line({1.0}), {}}), InputError);
}

TEST(Driver, ZeroScreen) {
  const PointSet p = testing_support::line({0.0, 10.0});
  const auto run = ndp_solve(KCenterProblem(1.0), NdpInstance<KCenterContext>{p, {2}});
  EXPECT_TRUE(run.zero);
  EXPECT_TRUE(run.trace.steps.empty());
}

TEST(RefinePhi, ReachesTargetSpread) {
  FixedValueProblem problem;
  problem.value = 10.0;
  const NdpInstance<Empty> inst{testing_support::line({0.0, 1.0}), {}};
  const Interval iv = refine_phi(problem, inst, {1.0, 148.0});
  EXPECT_TRUE(iv.contains(10.0));
  EXPECT_LE(iv.spread(), 2.0 + 1e-12);
  EXPECT_LE(problem.calls, 4u);
}

TEST(RefinePhi, NarrowIntervalUntouched) {
  FixedValueProblem problem;
  problem.value = 1.5;
  const NdpInstance<Empty> inst{testing_support::line({0.0, 1.0}), {}};
  const Interval iv = refine_phi(problem, inst, {1.0, 1.8});
  EXPECT_EQ(iv.lo, 1.0);
  EXPECT_EQ(iv.hi, 1.8);
  EXPECT_EQ(problem.calls, 0u);
}

TEST(RefinePhi, ValueAtLeftEnd) {
  FixedValueProblem problem;
  problem.value = 1.0;
  const NdpInstance<Empty> inst{testing_support::line({0.0, 1.0}), {}};
  const Interval iv = refine_phi(problem, inst, {1.0, 4.0});
  EXPECT_EQ(iv.lo, 1.0);
  EXPECT_EQ(iv.hi, 2.0);
}

TEST(RefinePhi, KCenterWithinFactor) {
  PointSet p(2);
  p.push_back({0.0, 0.0});
  p.push_back({10.0, 0.0});
  p.push_back({20.0, 0.0});
  const KCenterProblem problem(1.0);
  const NdpInstance<KCenterContext> inst{p, {1}};
  const Interval iv = refine_phi(problem, inst, ndp_solve(problem, inst).interval);
  EXPECT_TRUE(iv.contains(10.0));
  EXPECT_LE(iv.spread(), problem.phi() * (1 + 1e-12));
}

TEST(RefineEps, FirstRoundAccuracy) {
  FixedValueProblem problem;
  problem.value = 1.3;
  const NdpInstance<Empty> inst{testing_support::line({0.0, 1.0}), {}};
  std::size_t rounds = 0;
  const Interval iv = refine_eps(problem, inst, {1.0, 2.0}, std::sqrt(2.0) - 1.0 + 1e-12, &rounds);
  EXPECT_EQ(rounds, 1u);
  EXPECT_NEAR(iv.spread() - 1.0, std::sqrt(2.0) - 1.0, 1e-12);
  EXPECT_TRUE(iv.contains(1.3));
}

TEST(RefineEps, AlreadyNarrow) {
  FixedValueProblem problem;
  const NdpInstance<Empty> inst{testing_support::line({0.0, 1.0}), {}};
  std::size_t rounds = 7;
  refine_eps(problem, inst, {1.0, 1.1}, 0.1, &rounds);
  EXPECT_EQ(rounds, 0u);
}

TEST(RefineEps, KthDistanceToy) {
  std::mt19937_64 rng(2);
  const PointSet p = testing_support::random_points(rng, 30, 2);
  const double truth = oracle::kth_distance(p, 17);
  const KthDistanceProblem problem(1.0);
  const NdpInstance<RankContext> inst{p, {17, 1}};
  const auto run = ndp_solve(problem, inst);
  const Interval iv = refine_eps(problem, inst, run.interval, 0.1);
  EXPECT_LE(iv.spread(), 1.1 + 1e-12);
  EXPECT_TRUE(iv.contains(truth));
}

TEST(RankStability, Examples) {
  EXPECT_TRUE(rank_stable_under_perturbation({1, 2, 3}, {1.05, 2.05, 3.05}, 0.1, 2));
  EXPECT_TRUE(rank_stable_under_perturbation({1, 1, 2}, {1.01, 0.99, 2.0}, 0.1, 1));
  EXPECT_THROW(rank_stable_under_perturbation({1}, {1}, 0.1, 2), InputError);
}

TEST(RankStability, RandomJitter) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> jitter(-0.0999, 0.0999);
  std::vector<double> v(100);
  for (auto& x : v) x = u(rng);
  std::vector<double> w = v;
  for (auto& x : w) x += jitter(rng);
  for (std::size_t k = 1; k <= v.size(); ++k) EXPECT_TRUE(rank_stable_under_perturbation(v, w, 0.1, k));
}
