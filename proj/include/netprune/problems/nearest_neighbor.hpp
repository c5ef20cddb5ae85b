#pragma once

// Selection among nearest-neighbor distances: the k-th smallest m-NN
// distance to within 1 + eps, and the exact k-th smallest NN distance
// (furthest NN and closest pair as the two extremes).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "netprune/problems/common.hpp"

namespace netprune {

// Each unit point q contributes d_m(q): the distance to its m-th nearest
// other unit point. Copies of a location are at distance zero from it.
class KthMnnProblem {
 public:
  using Context = RankContext;

  explicit KthMnnProblem(double eps = 1.0) : eps_(decider_eps(eps)) {}

  double phi() const { return dual_radius_phi(eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const { return decide(r, inst, eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst, double eps) const {
    check_radius(r);
    const auto [k, m] = inst.context;
    if (k == 0 || m == 0) throw InfeasibleError("invalid rank context");
    const double e = decider_eps(eps);
    const PointSet& points = inst.points;
    const Grid grid(points, side_for_diameter(e * r / 4.0, points.dimension()));
    return dual_radius_decide(r, e, [&](double rho) {
      std::uint64_t votes = 0;
      for (std::size_t i = 0; i < points.size() && votes < k; ++i) {
        std::uint64_t seen = 0;
        grid.for_each_cell_near(points.point(i), rho, [&](std::size_t c) {
          if (seen <= m) seen += grid.cell_weight(c);
        });
        if (seen >= m + 1) votes += points.weight(i);
      }
      return votes >= k;
    });
  }

  // A far point's m-NN distance exceeds the answer and removing it cannot
  // change any smaller m-NN distance. Only heavy points would shift the
  // rank, and heavy points are never far.
  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    std::uint64_t removed = 0;
    for (auto i : split.far) {
      if (inst.points.weight(i) > inst.context.m) removed += inst.points.weight(i);
    }
    if (removed >= inst.context.k) throw InfeasibleError("prune consumed the rank");
    return {inst.context.k - removed, inst.context.m};
  }

  bool is_zero(const NdpInstance<Context>& inst) const {
    std::uint64_t zeros = 0;
    for (auto w : inst.points.weights()) {
      if (w - 1 >= inst.context.m) zeros += w;
    }
    return inst.context.k <= zeros;
  }

 private:
  double eps_;
};

inline void check_mnn_rank(const PointSet& locations, std::uint64_t k, std::uint64_t m) {
  const std::uint64_t total = locations.total_weight();
  if (m < 1) throw InputError("m must be positive");
  if (m >= total) throw InfeasibleError("every m-NN distance is infinite");
  if (k < 1 || k > total) throw InfeasibleError("k out of range");
}

inline Solution solve_kth_mnn(const PointSet& rows, std::uint64_t k, std::uint64_t m,
                              const SolveOptions& options = {}) {
  const MergeResult merged = merge_duplicates(rows);
  check_mnn_rank(merged.locations, k, m);
  const KthMnnProblem problem(1.0);
  return solve_with_eps_refinement(problem, NdpInstance<RankContext>{merged.locations, {k, m}}, options);
}

// Exact k-th smallest nearest-neighbor distance. A (1+1)-approximation r
// with answer <= r <= 2*answer makes every point whose NN distance could be
// the answer alone in its cell of diameter r/4; only those are resolved
// exactly.
inline Solution exact_kth_nn(const PointSet& rows, std::uint64_t k, const SolveOptions& options = {}) {
  const MergeResult merged = merge_duplicates(rows);
  const PointSet& points = merged.locations;
  check_mnn_rank(points, k, 1);

  SolveOptions coarse = options;
  coarse.eps = 1.0;
  Solution s = solve_kth_mnn(points, k, 1, coarse);
  if (s.zero) {
    s.value = 0.0;
    return s;
  }
  const double r = s.interval.hi;
  const std::size_t dim = points.dimension();
  const Grid fine(points, side_for_diameter(r / 4.0, dim));
  const Grid coarse_grid(points, r);
  const double r2 = r * r;

  std::uint64_t below = 0;
  std::vector<double> lonely;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points.weight(i) > 1 || fine.members(fine.cell_of(i)).size() > 1) {
      below += points.weight(i);
      continue;
    }
    const auto p = points.point(i);
    double best = std::numeric_limits<double>::infinity();
    coarse_grid.for_each_point_near(p, r, [&](std::size_t j) {
      if (j != i) {
        const double d = squared_distance(p, points.point(j));
        if (d <= r2) best = std::min(best, d);
      }
    });
    lonely.push_back(length_from_squared(best));
  }
  if (below >= k || k - below > lonely.size()) throw ContractError("approximation did not bracket the answer");
  const std::size_t rank = static_cast<std::size_t>(k - below - 1);
  std::nth_element(lonely.begin(), lonely.begin() + rank, lonely.end());
  s.value = lonely[rank];
  if (!std::isfinite(s.value)) throw ContractError("approximation did not bracket the answer");
  s.interval = {s.value, s.value};
  return s;
}

inline Solution furthest_nn(const PointSet& rows, const SolveOptions& options = {}) {
  return exact_kth_nn(rows, rows.total_weight(), options);
}

inline Solution closest_pair(const PointSet& rows, const SolveOptions& options = {}) {
  return exact_kth_nn(rows, 1, options);
}

// Bichromatic variant: the k-th smallest of d(p, blue) over red unit points.
// Decider only.
inline DeciderOutcome bichromatic_nn_decide(double r, const PointSet& red, const PointSet& blue,
                                            std::uint64_t k, double eps) {
  check_radius(r);
  if (red.empty() || blue.empty()) throw InputError("both colors must be present");
  if (k < 1 || k > red.total_weight()) throw InfeasibleError("k out of range");
  const double e = decider_eps(eps);
  const Grid grid(blue, side_for_diameter(e * r / 4.0, blue.dimension()));
  return dual_radius_decide(r, e, [&](double rho) {
    std::uint64_t votes = 0;
    for (std::size_t i = 0; i < red.size() && votes < k; ++i) {
      bool hit = false;
      grid.for_each_cell_near(red.point(i), rho, [&](std::size_t) { hit = true; });
      if (hit) votes += red.weight(i);
    }
    return votes >= k;
  });
}

}  // namespace netprune
