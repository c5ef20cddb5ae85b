#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "netprune/geom.hpp"

namespace testing_support {

inline netprune::PointSet line(std::initializer_list<double> xs) {
  netprune::PointSet p(1);
  for (double x : xs) p.push_back({x});
  return p;
}

inline netprune::PointSet random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, double box = 1.0) {
  std::uniform_real_distribution<double> u(0.0, box);
  netprune::PointSet p(dim);
  std::vector<double> c(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : c) v = u(rng);
    p.push_back(c);
  }
  return p;
}

// Random points snapped to a coarse lattice so that ties and duplicate rows
// show up often.
inline netprune::PointSet snapped_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, int levels) {
  std::uniform_int_distribution<int> u(0, levels - 1);
  netprune::PointSet p(dim);
  std::vector<double> c(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : c) v = u(rng);
    p.push_back(c);
  }
  return p;
}

}  // namespace testing_support
