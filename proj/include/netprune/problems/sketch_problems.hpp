#pragma once

// Optimization over sketchable families: smallest enclosing ball, smallest
// connectivity component, min-max clustering and connected clustering.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "netprune/problems/common.hpp"
#include "netprune/problems/connectivity.hpp"
#include "netprune/sketch.hpp"

namespace netprune {

template <SketchFamily F>
struct SketchContext {
  std::vector<typename F::Sketch> sketches;  // one per location of the instance
};

template <SketchFamily F>
SketchContext<F> keep_sketches(const SketchContext<F>& ctx, std::span<const std::size_t> kept) {
  SketchContext<F> out;
  out.sketches.reserve(kept.size());
  for (auto i : kept) out.sketches.push_back(ctx.sketches[i]);
  return out;
}

template <SketchFamily F>
SketchContext<F> merge_sketches_on_net(const F& family, const SketchContext<F>& ctx, const NetResult& net) {
  SketchContext<F> out{std::vector<typename F::Sketch>(net.centers.size(), family.empty())};
  for (std::size_t i = 0; i < net.assignment.size(); ++i) {
    const std::size_t c = net.assignment[i];
    out.sketches[c] = family.combine(out.sketches[c], ctx.sketches[i]);
  }
  return out;
}

template <SketchFamily F>
std::vector<typename F::Sketch> cluster_sketches(const F& family, const SketchContext<F>& ctx,
                                                 std::span<const std::size_t> cluster_of, std::size_t count) {
  std::vector<typename F::Sketch> out(count, family.empty());
  for (std::size_t i = 0; i < cluster_of.size(); ++i) {
    out[cluster_of[i]] = family.combine(out[cluster_of[i]], ctx.sketches[i]);
  }
  return out;
}

// Shared plumbing: context updates and the instance builder.
template <SketchFamily F>
class SketchProblemBase {
 public:
  using Context = SketchContext<F>;

  explicit SketchProblemBase(F family) : family_(std::move(family)) {}

  const F& family() const { return family_; }

  Context update_context_on_net(const NdpInstance<Context>& inst, const NetResult& net) const {
    return merge_sketches_on_net(family_, inst.context, net);
  }

  bool any_member(const Context& ctx) const {
    return std::any_of(ctx.sketches.begin(), ctx.sketches.end(), [&](const auto& s) { return family_.member(s); });
  }

  bool all_members(const Context& ctx) const {
    return std::all_of(ctx.sketches.begin(), ctx.sketches.end(), [&](const auto& s) { return family_.member(s); });
  }

 protected:
  F family_;
};

// Answers in units of twice the ball radius, so that a point whose nearest
// neighbor is farther than the answer can never sit in an optimal ball.
template <SketchFamily F>
class MinBallProblem : public SketchProblemBase<F> {
 public:
  using Context = SketchContext<F>;

  explicit MinBallProblem(F family, double eps = 1.0) : SketchProblemBase<F>(std::move(family)), eps_(decider_eps(eps)) {}

  double phi() const { return dual_radius_phi(eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const { return decide(r, inst, eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst, double eps) const {
    check_radius(r);
    const double e = decider_eps(eps);
    const double side = side_for_diameter(e * r / 8.0, inst.points.dimension());
    const F& family = this->family_;
    return dual_radius_decide(r, e, [&](double rho) {
      KeyIndex registered(inst.points.dimension(), inst.points.size());
      std::vector<typename F::Sketch> combined;
      bool found = false;
      for (std::size_t i = 0; i < inst.points.size() && !found; ++i) {
        for_each_key_near(inst.points.point(i), rho / 2.0, side, [&](const GridKey& key) {
          const auto [id, inserted] = registered.insert(key);
          if (inserted) combined.push_back(family.empty());
          combined[id] = family.combine(combined[id], inst.context.sketches[i]);
          if (family.member(combined[id])) found = true;
        });
      }
      return found;
    });
  }

  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    return keep_sketches(inst.context, split.close);
  }

  bool is_zero(const NdpInstance<Context>& inst) const { return this->any_member(inst.context); }

 private:
  double eps_;
};

// Smallest r such that some cluster of the r-connectivity clustering is a
// member.
template <SketchFamily F>
class MinComponentProblem : public SketchProblemBase<F> {
 public:
  using Context = SketchContext<F>;

  explicit MinComponentProblem(F family, double eps = 1.0)
      : SketchProblemBase<F>(std::move(family)), eps_(decider_eps(eps)) {}

  double phi() const { return dual_radius_phi(eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const { return decide(r, inst, eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst, double eps) const {
    check_radius(r);
    const double e = decider_eps(eps);
    const double side = side_for_diameter(e * r / 8.0, inst.points.dimension());
    return dual_radius_decide(r, e, [&](double rho) {
      const Partition part = partition_by_cell_pairs(inst.points, rho, side);
      const auto sk = cluster_sketches(this->family_, inst.context, part.cluster_of, part.cluster_count);
      return std::any_of(sk.begin(), sk.end(), [&](const auto& s) { return this->family_.member(s); });
    });
  }

  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    return keep_sketches(inst.context, split.close);
  }

  bool is_zero(const NdpInstance<Context>& inst) const { return this->any_member(inst.context); }

 private:
  double eps_;
};

// Smallest r such that every cluster of the r-connectivity clustering is a
// member.
template <SketchFamily F>
class ConnectedClusterProblem : public SketchProblemBase<F> {
 public:
  using Context = SketchContext<F>;

  explicit ConnectedClusterProblem(F family, double eps = 1.0)
      : SketchProblemBase<F>(std::move(family)), eps_(decider_eps(eps)) {}

  double phi() const { return dual_radius_phi(eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const { return decide(r, inst, eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst, double eps) const {
    check_radius(r);
    const double e = decider_eps(eps);
    const double side = side_for_diameter(e * r / 8.0, inst.points.dimension());
    return dual_radius_decide(r, e, [&](double rho) {
      const Partition part = partition_by_cell_pairs(inst.points, rho, side);
      const auto sk = cluster_sketches(this->family_, inst.context, part.cluster_of, part.cluster_count);
      return std::all_of(sk.begin(), sk.end(), [&](const auto& s) { return this->family_.member(s); });
    });
  }

  // An isolated point is a finished cluster; it must already be a member.
  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    for (auto i : split.far) {
      if (!this->family_.member(inst.context.sketches[i])) {
        throw ContractError("pruned an isolated point that cannot form a cluster");
      }
    }
    return keep_sketches(inst.context, split.close);
  }

  bool is_zero(const NdpInstance<Context>& inst) const { return this->all_members(inst.context); }

 private:
  double eps_;
};

// Min-max clustering: cover the points by balls centered at input points,
// assigning every point to one ball so that each ball's set is a member;
// minimize the largest radius.
template <SketchFamily F>
class MinMaxClusterProblem : public SketchProblemBase<F> {
 public:
  using Context = SketchContext<F>;

  explicit MinMaxClusterProblem(F family, double eps = 1.0)
      : SketchProblemBase<F>(std::move(family)), eps_(eps) {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
  }

  double phi() const { return 4.0 + eps_; }

  // Clusters of the 4s-net under nearest assignment all members. Succeeds
  // whenever s >= f, and success gives a clustering of cost < 4s.
  bool feasible_at(double s, const NdpInstance<Context>& inst, NetResult* witness = nullptr) const {
    NetResult net = compute_net(inst.points, 4.0 * s, true);
    const auto sk = cluster_sketches(this->family_, inst.context, net.assignment, net.centers.size());
    const bool ok = std::all_of(sk.begin(), sk.end(), [&](const auto& x) { return this->family_.member(x); });
    if (ok && witness) *witness = std::move(net);
    return ok;
  }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const {
    check_radius(r);
    if (feasible_at(r / 4.0, inst)) return DeciderOutcome::below(r);
    if (!feasible_at(r, inst)) return DeciderOutcome::above(r);
    double lo = r / 4.0;
    double hi = r;
    while (hi / lo > 1.0 + eps_ / 4.0) {
      const double mid = std::sqrt(lo * hi);
      if (feasible_at(mid, inst)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return DeciderOutcome::bounded(lo, 4.0 * hi);
  }

  // An isolated point forms a cluster by itself in every optimal solution.
  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    for (auto i : split.far) {
      if (!this->family_.member(inst.context.sketches[i])) {
        throw ContractError("pruned an isolated point that cannot form a cluster");
      }
    }
    return keep_sketches(inst.context, split.close);
  }

  bool is_zero(const NdpInstance<Context>& inst) const { return this->all_members(inst.context); }

 private:
  double eps_;
};

template <SketchFamily F>
NdpInstance<SketchContext<F>> sketch_instance(const F& family, const PointSet& rows,
                                              std::span<const PointAttributes> attributes) {
  const MergeResult merged = merge_duplicates(rows);
  NdpInstance<SketchContext<F>> inst{merged.locations, {location_sketches(family, rows, merged, attributes)}};
  const auto all = combine_all<F>(family, inst.context.sketches);
  if (!family.member(all)) throw InfeasibleError("the whole input does not belong to the family");
  return inst;
}

// Value is the ball radius.
template <SketchFamily F>
Solution solve_min_ball(const PointSet& rows, std::span<const PointAttributes> attributes, const F& family,
                        const SolveOptions& options = {}) {
  const MinBallProblem<F> problem(family, 1.0);
  Solution s = solve_with_eps_refinement(problem, sketch_instance(family, rows, attributes), options);
  s.interval = {s.interval.lo / 2.0, s.interval.hi / 2.0};
  s.value = s.interval.hi;
  return s;
}

template <SketchFamily F>
Solution solve_min_component(const PointSet& rows, std::span<const PointAttributes> attributes, const F& family,
                             const SolveOptions& options = {}) {
  const MinComponentProblem<F> problem(family, 1.0);
  return solve_with_eps_refinement(problem, sketch_instance(family, rows, attributes), options);
}

template <SketchFamily F>
Solution solve_connected_cluster(const PointSet& rows, std::span<const PointAttributes> attributes, const F& family,
                                 const SolveOptions& options = {}) {
  const ConnectedClusterProblem<F> problem(family, 1.0);
  return solve_with_eps_refinement(problem, sketch_instance(family, rows, attributes), options);
}

struct MinMaxSolution {
  Solution run;          // value: cost of the clustering below
  PointSet locations;    // merged input
  NetResult clustering;  // centers and assignment over `locations`
};

inline double clustering_cost(const PointSet& points, const NetResult& clustering) {
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    worst = std::max(worst, distance(points.point(i), clustering.net.point(clustering.assignment[i])));
  }
  return worst;
}

// Brackets the optimum within 4 + eps, then walks up a (1 + eps/4) ladder
// from the lower end to the first radius admitting a clustering.
template <SketchFamily F>
MinMaxSolution solve_minmax_cluster(const PointSet& rows, std::span<const PointAttributes> attributes,
                                    const F& family, const SolveOptions& options = {}) {
  const MinMaxClusterProblem<F> problem(family, options.eps);
  auto instance = sketch_instance(family, rows, attributes);
  MinMaxSolution out;
  out.locations = instance.points;
  const auto run = ndp_solve(problem, instance, driver_options(options));
  fill_stats(out.run, run, options.keep_trace);
  if (run.zero) {
    for (std::size_t i = 0; i < instance.points.size(); ++i) {
      out.clustering.centers.push_back(i);
      out.clustering.assignment.push_back(i);
    }
    out.clustering.net = instance.points;
    return out;
  }
  out.run.interval = refine_phi(problem, instance, run.interval);
  const double step = 1.0 + options.eps / 4.0;
  for (double s = out.run.interval.lo / 4.0;; s *= step) {
    if (problem.feasible_at(s, instance, &out.clustering)) break;
    if (s > out.run.interval.hi) throw ContractError("no feasible clustering above the bracket");
  }
  out.run.value = clustering_cost(instance.points, out.clustering);
  return out;
}

}  // namespace netprune
