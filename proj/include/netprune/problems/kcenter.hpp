#pragma once

// k-center clustering: the smallest r such that k balls of radius r centered
// at input points cover the input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "netprune/problems/common.hpp"

namespace netprune {

struct KCenterContext {
  std::uint64_t k = 1;
};

class KCenterProblem {
 public:
  using Context = KCenterContext;

  explicit KCenterProblem(double eps = 1.0) : eps_(eps) {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
  }

  double phi() const { return 4.0 + eps_; }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const {
    check_radius(r);
    const std::uint64_t k = inst.context.k;
    if (k == 0) throw InfeasibleError("no centers left");
    if (compute_net(inst.points, r).centers.size() <= k) return DeciderOutcome::below(r);
    const double wide = (2.0 + eps_ / 2.0) * r;
    if (compute_net(inst.points, wide).centers.size() <= k) return DeciderOutcome::bounded(r / 2.0, wide);
    return DeciderOutcome::above(r);
  }

  // Each far point is a cluster of its own.
  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    if (split.far.size() >= inst.context.k) throw InfeasibleError("prune used up every center");
    return {inst.context.k - split.far.size()};
  }

  bool is_zero(const NdpInstance<Context>& inst) const { return inst.context.k >= inst.points.size(); }

 private:
  double eps_;
};

struct KCenterSolution {
  double radius = 0.0;
  PointSet centers;
  Interval interval;  // contains the optimal radius
  Solution run;
};

// Coverage radius of `centers` over `points`.
inline double covering_radius(const PointSet& points, const PointSet& centers) {
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      best = std::min(best, squared_distance(points.point(i), centers.point(c)));
    }
    worst = std::max(worst, best);
  }
  return length_from_squared(worst);
}

// Locates the optimum within a constant factor with the driver, then picks
// centers by farthest-point insertion, which is within twice the optimum.
inline KCenterSolution kcenter_2approx(const PointSet& rows, std::uint64_t k, const SolveOptions& options = {}) {
  if (k == 0) throw InputError("k must be positive");
  const MergeResult merged = merge_duplicates(rows);
  const PointSet& points = merged.locations;
  const std::size_t n = points.size();

  KCenterSolution out;
  if (k >= n) {
    out.centers = points;
    out.run.zero = true;
    return out;
  }

  const KCenterProblem problem(options.eps);
  NdpInstance<KCenterContext> instance{points, {k}};
  const auto run = ndp_solve(problem, instance, driver_options(options));
  fill_stats(out.run, run, options.keep_trace);
  out.interval = refine_phi(problem, instance, run.interval);
  out.run.interval = out.interval;

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> chosen;
  std::size_t next = 0;
  for (std::uint64_t c = 0; c < k; ++c) {
    chosen.push_back(next);
    const auto p = points.point(next);
    std::size_t far = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], squared_distance(p, points.point(i)));
      if (dist[i] > dist[far]) far = i;
    }
    next = far;
  }
  out.centers = points.subset(chosen);
  out.radius = length_from_squared(*std::max_element(dist.begin(), dist.end()));
  out.run.value = out.radius;
  return out;
}

}  // namespace netprune
