#pragma once

#include <random>

#include "netprune/problems/common.hpp"

namespace netprune {

// Exact smallest distance between two distinct locations of a multiset.
// Repeatedly samples a point and drops every point whose nearest other
// location is at least as far as the sample's; when nothing survives, the
// sample's distance is the answer.
inline double smallest_nonzero_distance(const PointSet& rows, std::uint64_t seed = 1,
                                        std::size_t* iterations = nullptr) {
  PointSet points = merge_duplicates(rows).locations;
  if (points.size() < 2) throw InfeasibleError("all points coincide; no nonzero distance");
  std::mt19937_64 rng(seed);
  std::size_t count = 0;
  while (true) {
    ++count;
    const double nu = uniform_nn_radius(points, rng);
    const FarCloseSplit split = del_far(points, nu, DuplicateMode::Collapsed);
    if (split.close.empty()) {
      if (iterations) *iterations = count;
      return nu;
    }
    points = points.subset(split.close);
  }
}

}  // namespace netprune
