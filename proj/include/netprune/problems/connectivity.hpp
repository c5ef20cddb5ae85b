#pragma once

// Approximate connectivity clustering and the k-th longest / shortest edge
// of the Euclidean minimum spanning tree.

#include <cstdint>
#include <numeric>
#include <vector>

#include "netprune/problems/common.hpp"

namespace netprune {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct Partition {
  std::vector<std::size_t> cluster_of;
  std::size_t cluster_count = 0;

  std::vector<std::vector<std::size_t>> clusters() const {
    std::vector<std::vector<std::size_t>> out(cluster_count);
    for (std::size_t i = 0; i < cluster_of.size(); ++i) out[cluster_of[i]].push_back(i);
    return out;
  }
};

// Joins the cells of every pair of cells within box distance rho. Points
// at distance <= rho always end up together, and joined points are within
// rho plus two cell diameters.
inline Partition partition_by_cell_pairs(const PointSet& points, double rho, double side) {
  const Grid grid(points, side);
  DisjointSets cells(grid.cell_count());
  grid.for_each_cell_pair(rho, [&](std::size_t a, std::size_t b) {
    cells.unite(a, b);
    return true;
  });
  Partition part;
  part.cluster_of.resize(points.size());
  std::vector<std::size_t> label(grid.cell_count(), grid.cell_count());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& l = label[cells.find(grid.cell_of(i))];
    if (l == grid.cell_count()) l = part.cluster_count++;
    part.cluster_of[i] = l;
  }
  return part;
}

// A partition between the r- and (1+eps)r-connectivity clusterings.
inline Partition connectivity_partition(const PointSet& points, double r, double eps) {
  check_radius(r);
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (points.empty()) throw InputError("empty point set");
  return partition_by_cell_pairs(points, r, side_for_diameter(eps * r / 8.0, points.dimension()));
}

// f = smallest r whose connectivity clustering has at most k clusters, which
// is the k-th longest spanning tree edge.
class MstKthEdgeProblem {
 public:
  using Context = RankContext;

  explicit MstKthEdgeProblem(double eps = 1.0) : eps_(decider_eps(eps)) {}

  double phi() const { return dual_radius_phi(eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst) const { return decide(r, inst, eps_); }

  DeciderOutcome decide(double r, const NdpInstance<Context>& inst, double eps) const {
    check_radius(r);
    const std::uint64_t k = inst.context.k;
    if (k == 0) throw InfeasibleError("rank exhausted");
    const double e = decider_eps(eps);
    const double side = side_for_diameter(e * r / 8.0, inst.points.dimension());
    return dual_radius_decide(r, e, [&](double rho) {
      return partition_by_cell_pairs(inst.points, rho, side).cluster_count <= k;
    });
  }

  // A far point is a cluster by itself at the answer's radius.
  Context update_context_on_prune(const NdpInstance<Context>& inst, const FarCloseSplit& split) const {
    if (split.far.size() >= inst.context.k) throw InfeasibleError("prune consumed the rank");
    return {inst.context.k - split.far.size(), inst.context.m};
  }

  bool is_zero(const NdpInstance<Context>& inst) const { return inst.context.k >= inst.points.size(); }

 private:
  double eps_;
};

// k counts from the longest edge, or from the shortest with `shortest`.
inline Solution solve_mst_kth_edge(const PointSet& rows, std::uint64_t k, bool shortest,
                                   const SolveOptions& options = {}) {
  const MergeResult merged = merge_duplicates(rows);
  const std::uint64_t edges = merged.locations.total_weight() - 1;
  if (k < 1 || k > edges) throw InfeasibleError("k out of range");
  const std::uint64_t longest_rank = shortest ? edges - k + 1 : k;
  const MstKthEdgeProblem problem(1.0);
  return solve_with_eps_refinement(problem, NdpInstance<RankContext>{merged.locations, {longest_rank, 1}},
                                   options);
}

}  // namespace netprune
