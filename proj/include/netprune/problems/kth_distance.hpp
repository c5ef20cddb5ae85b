#pragma once

// Distance selection: the k-th smallest of the binom(n, 2) pairwise
// distances of a multiset, to within 1 + eps.

#include <cstdint>

#include "netprune/problems/common.hpp"

namespace netprune {

// Number of unordered pairs of unit points lying in cells at box gap <= rho,
// or `stop` if that many are found first. Counts every pair at distance
// <= rho and none farther than rho plus two cell diameters.
inline std::uint64_t count_pairs_within(const Grid& grid, double rho, std::uint64_t stop) {
  std::uint64_t total_weight = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) total_weight += grid.cell_weight(c);
  // Ordered pairs including each unit point with itself.
  const std::uint64_t target = 2 * stop + total_weight;
  std::uint64_t ordered = 0;
  grid.for_each_cell_pair(rho, [&](std::size_t a, std::size_t b) {
    ordered += grid.cell_weight(a) * grid.cell_weight(b);
    return ordered < target;
  });
  if (ordered >= target) return stop;
  return (ordered - total_weight) / 2;
}

class KthDistanceProblem {
 public:
  using Context = RankContext;

  explicit KthDistanceProblem(double eps = 1.0) : eps_(decider_eps(eps)) {}

  double phi() const { return dual_radius_phi(eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const { return decide(r, inst, eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst, double eps) const {
    check_radius(r);
    const std::uint64_t k = inst.context.k;
    if (k == 0) throw InfeasibleError("rank exhausted");
    const double e = decider_eps(eps);
    const Grid grid(inst.points, side_for_diameter(e * r / 8.0, inst.points.dimension()));
    return dual_radius_decide(r, e, [&](double rho) { return count_pairs_within(grid, rho, k) >= k; });
  }

  // Far points have weight one and only take part in pairs longer than the
  // answer, so the rank only moves by their zero-length pairs.
  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    std::uint64_t removed = 0;
    for (auto i : split.far) removed += pairs_of(inst.points.weight(i));
    if (removed >= inst.context.k) throw InfeasibleError("prune consumed the rank");
    return {inst.context.k - removed, inst.context.m};
  }

  bool is_zero(const NdpInstance<Context>& inst) const {
    std::uint64_t zeros = 0;
    for (auto w : inst.points.weights()) zeros += pairs_of(w);
    return inst.context.k <= zeros;
  }

 private:
  double eps_;
};

inline Solution solve_kth_distance(const PointSet& rows, std::uint64_t k, const SolveOptions& options = {}) {
  const MergeResult merged = merge_duplicates(rows);
  const std::uint64_t total = merged.locations.total_weight();
  if (k < 1 || k > pairs_of(total)) throw InfeasibleError("k exceeds the number of pairs");
  const KthDistanceProblem problem(1.0);
  return solve_with_eps_refinement(problem, NdpInstance<RankContext>{merged.locations, {k, 1}}, options);
}

}  // namespace netprune
