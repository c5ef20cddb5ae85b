#pragma once

// r-nets and far/close splitting, the two primitives the driver alternates
// between.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/geom.hpp"

namespace netprune {

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

struct NetResult {
  PointSet net;                         // weights aggregated over assigned points
  std::vector<std::size_t> assignment;  // input index -> net index
  std::vector<std::size_t> centers;     // net index -> input index

  std::vector<std::vector<std::size_t>> clusters() const {
    std::vector<std::vector<std::size_t>> out(centers.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
  }
};

inline void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("radius must be positive and finite");
}

// Scans the points in input order. An unmarked point becomes a net point and
// marks every unmarked point within distance < r. With `nearest_assignment`
// a second pass moves each point to its closest net point.
inline NetResult compute_net(const PointSet& points, double r, bool nearest_assignment = false) {
  check_radius(r);
  if (points.empty()) throw InputError("cannot compute a net of an empty point set");
  const std::size_t n = points.size();
  const std::size_t dim = points.dimension();
  const double side = r / (2.0 * std::sqrt(static_cast<double>(dim)));
  const Grid grid(points, side);
  const double r2 = r * r;

  NetResult result;
  result.assignment.assign(n, kUnassigned);
  for (std::size_t i = 0; i < n; ++i) {
    if (result.assignment[i] != kUnassigned) continue;
    const std::size_t c = result.centers.size();
    result.centers.push_back(i);
    const auto p = points.point(i);
    result.assignment[i] = c;
    grid.for_each_point_near(p, r, [&](std::size_t j) {
      if (result.assignment[j] == kUnassigned && squared_distance(p, points.point(j)) < r2) {
        result.assignment[j] = c;
      }
    });
  }

  result.net = points.subset(result.centers);

  if (nearest_assignment && result.centers.size() > 1) {
    const Grid center_grid(result.net, side);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = points.point(i);
      std::size_t best = result.assignment[i];
      double best_d = squared_distance(p, result.net.point(best));
      center_grid.for_each_point_near(p, r, [&](std::size_t c) {
        const double d = squared_distance(p, result.net.point(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      });
      result.assignment[i] = best;
    }
  }

  std::vector<std::uint64_t> weight(result.centers.size(), 0);
  for (std::size_t i = 0; i < n; ++i) weight[result.assignment[i]] += points.weight(i);
  PointSet net(dim);
  net.reserve(result.centers.size());
  for (std::size_t c = 0; c < result.centers.size(); ++c) net.push_back(result.net.point(c), weight[c]);
  result.net = std::move(net);
  return result;
}

struct FarCloseSplit {
  std::vector<std::size_t> close;  // d(p, P) < r
  std::vector<std::size_t> far;    // d(p, P) >= r
};

enum class DuplicateMode {
  Weighted,    // a point of weight >= 2 is at distance 0 from its copies
  Collapsed,   // copies are ignored; only other locations count
};

// Splits the points into r-close and r-far ones. Points must be distinct
// locations.
inline FarCloseSplit del_far(const PointSet& points, double r,
                             DuplicateMode mode = DuplicateMode::Weighted) {
  check_radius(r);
  if (mode == DuplicateMode::Weighted ? points.total_weight() < 2 : points.size() < 2) {
    throw InputError("nearest-neighbor distance undefined for fewer than two points");
  }
  const double side = side_for_diameter(r / 2.0, points.dimension());
  const Grid grid(points, side);
  const double r2 = r * r;

  std::vector<char> close(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    close[i] = (mode == DuplicateMode::Weighted && points.weight(i) >= 2) || grid.members(grid.cell_of(i)).size() >= 2;
  }
  grid.for_each_cell_pair(r, [&](std::size_t a, std::size_t b) {
    if (a == b) return true;
    for (auto i : grid.members(a)) {
      if (close[i]) continue;
      const auto p = points.point(i);
      for (auto j : grid.members(b)) {
        if (squared_distance(p, points.point(j)) < r2) {
          close[i] = 1;
          break;
        }
      }
    }
    return true;
  });
  FarCloseSplit split;
  for (std::size_t i = 0; i < points.size(); ++i) (close[i] ? split.close : split.far).push_back(i);
  return split;
}

struct MergeResult {
  PointSet locations;                    // distinct locations, weights summed
  std::vector<std::size_t> group_of_row;  // input row -> location index
};

// Collapses coincident rows into one weighted point. Coordinates are compared
// exactly, with -0.0 equal to 0.0.
inline MergeResult merge_duplicates(const PointSet& rows) {
  if (rows.empty()) throw InputError("empty point set");
  MergeResult out{PointSet(rows.dimension()), std::vector<std::size_t>(rows.size())};
  KeyIndex seen(rows.dimension(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto p = rows.point(i);
    GridKey key;
    for (std::size_t a = 0; a < p.size(); ++a) {
      const double v = p[a] == 0.0 ? 0.0 : p[a];
      key.id[a] = std::bit_cast<std::int64_t>(v);
    }
    const auto [id, inserted] = seen.insert(key);
    if (inserted) {
      out.locations.push_back(p, rows.weight(i));
    } else {
      out.locations.add_weight(id, rows.weight(i));
    }
    out.group_of_row[i] = id;
  }
  return out;
}

}  // namespace netprune
