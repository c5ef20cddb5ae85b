#pragma once

// Seeded synthetic point sets.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/geom.hpp"

namespace netprune {

enum class Distribution { UniformBox, GaussianMixture, TightPairs, Lattice, MultisetDuplicates };

inline constexpr std::array<std::string_view, 5> kDistributionNames = {
    "uniform-box", "gaussian-mixture", "tight-pairs", "lattice", "multiset-duplicates"};

inline Distribution parse_distribution(std::string_view name) {
  for (std::size_t i = 0; i < kDistributionNames.size(); ++i) {
    if (kDistributionNames[i] == name) return static_cast<Distribution>(i);
  }
  throw InputError("unknown distribution: " + std::string(name));
}

namespace detail {

inline std::size_t lattice_side(std::size_t count, std::size_t dim) {
  auto g = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(dim))));
  // pow can land just under an exact root
  while (g > 1 && static_cast<double>(std::pow(static_cast<double>(g - 1), static_cast<double>(dim))) >=
                      static_cast<double>(count)) {
    --g;
  }
  return std::max<std::size_t>(g, 1);
}

inline void lattice_point(std::size_t index, std::size_t side, std::vector<double>& out) {
  for (auto& c : out) {
    c = static_cast<double>(index % side);
    index /= side;
  }
}

}  // namespace detail

// Tight pairs sit on a jittered unit lattice (anchors at least 0.5 apart)
// with partners at distance kTightSpacing.
inline constexpr double kTightSpacing = 1e-3;

inline PointSet generate_points(Distribution dist, std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n == 0) throw InputError("n must be positive");
  PointSet out(dim);
  out.reserve(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(dim);

  switch (dist) {
    case Distribution::UniformBox:
      for (std::size_t i = 0; i < n; ++i) {
        for (auto& c : p) c = unit(rng);
        out.push_back(p);
      }
      break;
    case Distribution::GaussianMixture: {
      constexpr std::size_t kComponents = 8;
      std::vector<std::vector<double>> centers(kComponents, std::vector<double>(dim));
      for (auto& c : centers) {
        for (auto& v : c) v = unit(rng);
      }
      std::normal_distribution<double> noise(0.0, 0.02);
      std::uniform_int_distribution<std::size_t> pick(0, kComponents - 1);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& c = centers[pick(rng)];
        for (std::size_t a = 0; a < dim; ++a) p[a] = c[a] + noise(rng);
        out.push_back(p);
      }
      break;
    }
    case Distribution::TightPairs: {
      if (n % 2 != 0) throw InputError("tight-pairs needs an even n");
      const std::size_t pairs = n / 2;
      const std::size_t side = detail::lattice_side(pairs, dim);
      std::normal_distribution<double> dir(0.0, 1.0);
      std::vector<double> offset(dim);
      for (std::size_t i = 0; i < pairs; ++i) {
        detail::lattice_point(i, side, p);
        for (auto& c : p) c += 0.25 * (unit(rng) - 0.5);
        double norm = 0.0;
        do {
          norm = 0.0;
          for (auto& v : offset) {
            v = dir(rng);
            norm += v * v;
          }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        out.push_back(p);
        for (std::size_t a = 0; a < dim; ++a) p[a] += kTightSpacing * offset[a] / norm;
        out.push_back(p);
      }
      break;
    }
    case Distribution::Lattice: {
      const std::size_t side = detail::lattice_side(n, dim);
      for (std::size_t i = 0; i < n; ++i) {
        detail::lattice_point(i, side, p);
        out.push_back(p);
      }
      break;
    }
    case Distribution::MultisetDuplicates: {
      const std::size_t distinct = std::max<std::size_t>(1, n / 4);
      std::vector<std::vector<double>> sites(distinct, std::vector<double>(dim));
      for (auto& s : sites) {
        for (auto& v : s) v = unit(rng);
      }
      std::uniform_int_distribution<std::size_t> pick(0, distinct - 1);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = i < distinct ? i : pick(rng);
        out.push_back(sites[s]);
      }
      break;
    }
  }
  return out;
}

}  // namespace netprune
