#pragma once

// Points, weighted point sets, and hashed uniform grids.
//
// Everything in the library works on a PointSet: a flat array of d-dimensional
// coordinates with a positive integer weight per point. A weight-w point
// stands for w coincident unit points. Grids bucket a PointSet by
// componentwise floor(coord / sidelength) through a hash table, which is what
// makes every "linear time" step in the library linear in expectation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netprune/error.hpp"

namespace netprune {

// Grid keys are stored inline; instances above this dimension are rejected.
inline constexpr std::size_t kMaxDimension = 8;

struct WeightedPoint {
  std::vector<double> coords;
  std::uint64_t weight = 1;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

// Largest double whose square does not exceed s, so that a distance d
// returned here always satisfies d * d <= squared distance.
inline double length_from_squared(double s) {
  double d = std::sqrt(s);
  while (d > 0.0 && d * d > s) d = std::nextafter(d, 0.0);
  return d;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return length_from_squared(squared_distance(a, b));
}

class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dimension) : dim_(dimension) {
    if (dimension < 1 || dimension > kMaxDimension) {
      throw InputError("dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
    }
  }

  static PointSet from_points(std::span<const WeightedPoint> points) {
    if (points.empty()) throw InputError("empty point list");
    PointSet set(points.front().coords.size());
    set.reserve(points.size());
    for (const auto& p : points) set.push_back(p.coords, p.weight);
    return set;
  }

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::uint64_t weight(std::size_t i) const { return weights_[i]; }
  std::span<const std::uint64_t> weights() const { return weights_; }

  std::uint64_t total_weight() const {
    std::uint64_t total = 0;
    for (auto w : weights_) total += w;
    return total;
  }

  void reserve(std::size_t n) {
    coords_.reserve(n * dim_);
    weights_.reserve(n);
  }

  void push_back(std::span<const double> coords, std::uint64_t weight = 1) {
    if (dim_ == 0) throw InputError("point set has no dimension");
    if (coords.size() != dim_) throw InputError("dimension mismatch");
    if (weight == 0) throw InputError("weights must be positive");
    for (double c : coords) {
      if (!std::isfinite(c)) throw InputError("non-finite coordinate");
    }
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    weights_.push_back(weight);
  }

  void push_back(std::initializer_list<double> coords, std::uint64_t weight = 1) {
    push_back(std::span<const double>(coords.begin(), coords.size()), weight);
  }

  void add_weight(std::size_t i, std::uint64_t w) { weights_[i] += w; }

  PointSet subset(std::span<const std::size_t> indices) const {
    PointSet out(dim_);
    out.reserve(indices.size());
    for (auto i : indices) {
      out.coords_.insert(out.coords_.end(), coords_.begin() + i * dim_,
                         coords_.begin() + (i + 1) * dim_);
      out.weights_.push_back(weights_[i]);
    }
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint64_t> weights_;
};

// Distance from points[i] to the closest other point of the set, by linear
// scan. Points are assumed to be distinct locations.
inline double nearest_distance(const PointSet& points, std::size_t i) {
  double best = std::numeric_limits<double>::infinity();
  const auto p = points.point(i);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (j == i) continue;
    best = std::min(best, squared_distance(p, points.point(j)));
  }
  return length_from_squared(best);
}

struct GridKey {
  std::array<std::int64_t, kMaxDimension> id{};

  friend bool operator==(const GridKey&, const GridKey&) = default;
};

// Hash of the first `dim` lanes of a key.
inline std::uint64_t hash_key(const GridKey& key, std::size_t dim) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::size_t i = 0; i < dim; ++i) {
    h = (h ^ static_cast<std::uint64_t>(key.id[i])) * 0x100000001B3ULL + 0x9E3779B97F4A7C15ULL;
  }
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 31;
  return h;
}

// Open-addressing map from keys to dense ids 0, 1, ... in insertion order.
// Only the first `dim` lanes of a key take part; the rest must be zero.
class KeyIndex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit KeyIndex(std::size_t dim, std::size_t expected = 0) : dim_(dim) {
    keys_.reserve(expected);
    rehash(expected);
  }

  std::size_t size() const { return keys_.size(); }
  const GridKey& key(std::size_t id) const { return keys_[id]; }
  const std::vector<GridKey>& keys() const { return keys_; }

  // Id of `key`, and whether it was new.
  std::pair<std::size_t, bool> insert(const GridKey& key) {
    if (2 * (keys_.size() + 1) > slots_.size()) rehash(2 * keys_.size() + 2);
    const std::uint64_t h = hash_key(key, dim_);
    std::size_t s = h & mask_;
    while (slots_[s].id != npos) {
      if (slots_[s].hash == h && keys_[slots_[s].id] == key) return {slots_[s].id, false};
      s = (s + 1) & mask_;
    }
    slots_[s] = {h, keys_.size()};
    keys_.push_back(key);
    return {keys_.size() - 1, true};
  }

  std::size_t find(const GridKey& key) const {
    const std::uint64_t h = hash_key(key, dim_);
    std::size_t s = h & mask_;
    while (slots_[s].id != npos) {
      if (slots_[s].hash == h && keys_[slots_[s].id] == key) return slots_[s].id;
      s = (s + 1) & mask_;
    }
    return npos;
  }

 private:
  struct Slot {
    std::uint64_t hash = 0;
    std::size_t id = npos;
  };

  void rehash(std::size_t count) {
    std::size_t cap = 16;
    while (cap < 2 * count) cap *= 2;
    if (cap <= slots_.size()) return;
    slots_.assign(cap, Slot{});
    mask_ = cap - 1;
    for (std::size_t id = 0; id < keys_.size(); ++id) {
      const std::uint64_t h = hash_key(keys_[id], dim_);
      std::size_t s = h & mask_;
      while (slots_[s].id != npos) s = (s + 1) & mask_;
      slots_[s] = {h, id};
    }
  }

  std::size_t dim_;
  std::vector<GridKey> keys_;
  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
};

inline std::int64_t floor_to_key(double value) {
  constexpr double kLimit = 9.0e18;
  const double f = std::floor(value);
  if (!(f > -kLimit && f < kLimit)) throw InputError("coordinate overflows the grid key range");
  return static_cast<std::int64_t>(f);
}

inline GridKey grid_id(std::span<const double> p, double sidelength) {
  if (!(sidelength > 0.0) || !std::isfinite(sidelength)) {
    throw InputError("grid sidelength must be positive and finite");
  }
  if (p.size() > kMaxDimension) throw InputError("dimension too large for grid keys");
  GridKey key;
  for (std::size_t i = 0; i < p.size(); ++i) key.id[i] = floor_to_key(p[i] / sidelength);
  return key;
}

// Euclidean distance from p to the closed box of cell `key`.
inline double point_cell_distance(std::span<const double> p, const GridKey& key, double side) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = static_cast<double>(key.id[i]) * side;
    const double hi = lo + side;
    double gap = 0.0;
    if (p[i] < lo) {
      gap = lo - p[i];
    } else if (p[i] > hi) {
      gap = p[i] - hi;
    }
    s += gap * gap;
  }
  return std::sqrt(s);
}

// Squared gap between two closed cell boxes, in units of the sidelength.
inline std::int64_t cell_gap_squared(const GridKey& a, const GridKey& b, std::size_t dim) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    std::int64_t g = a.id[i] > b.id[i] ? a.id[i] - b.id[i] : b.id[i] - a.id[i];
    g = g > 0 ? g - 1 : 0;
    s += g * g;
  }
  return s;
}

// Sidelength giving a cell of Euclidean diameter `diameter` in dimension d.
inline double side_for_diameter(double diameter, std::size_t dim) {
  return diameter / std::sqrt(static_cast<double>(dim));
}

// Calls fn(key) for every cell of the grid with the given sidelength, empty
// or not, whose closed box is within distance r of p.
template <class Fn>
void for_each_key_near(std::span<const double> p, double r, double side, Fn&& fn) {
  const GridKey own = grid_id(p, side);
  const std::size_t dim = p.size();
  std::array<std::int64_t, kMaxDimension> lo{};
  std::array<std::int64_t, kMaxDimension> hi{};
  for (std::size_t i = 0; i < dim; ++i) {
    lo[i] = std::min(own.id[i], floor_to_key((p[i] - r) / side));
    hi[i] = std::max(own.id[i], floor_to_key((p[i] + r) / side));
  }
  GridKey key;
  for (std::size_t i = 0; i < dim; ++i) key.id[i] = lo[i];
  while (true) {
    if (key == own || point_cell_distance(p, key, side) <= r) fn(key);
    std::size_t axis = 0;
    while (axis < dim) {
      if (key.id[axis] < hi[axis]) {
        ++key.id[axis];
        break;
      }
      key.id[axis] = lo[axis];
      ++axis;
    }
    if (axis == dim) break;
  }
}

class Grid {
 public:
  Grid(const PointSet& points, double sidelength)
      : side_(sidelength), dim_(points.dimension()), index_(points.dimension(), points.size()) {
    if (points.empty()) throw InputError("cannot build a grid over an empty point set");
    if (!(sidelength > 0.0) || !std::isfinite(sidelength)) {
      throw InputError("grid sidelength must be positive and finite");
    }
    const std::size_t n = points.size();
    cell_of_point_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const GridKey key = grid_id(points.point(i), side_);
      const auto [cell, inserted] = index_.insert(key);
      if (inserted) {
        weights_.push_back(0);
        start_.push_back(0);
      }
      cell_of_point_[i] = cell;
      ++start_[cell];
      weights_[cell] += points.weight(i);
    }
    // Counts to CSR offsets.
    std::size_t running = 0;
    for (auto& s : start_) {
      const std::size_t c = s;
      s = running;
      running += c;
    }
    start_.push_back(running);
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members_[fill[cell_of_point_[i]]++] = i;
  }

  double sidelength() const { return side_; }
  std::size_t dimension() const { return dim_; }
  std::size_t cell_count() const { return index_.size(); }
  const GridKey& key(std::size_t cell) const { return index_.key(cell); }
  std::uint64_t cell_weight(std::size_t cell) const { return weights_[cell]; }
  std::size_t cell_of(std::size_t point) const { return cell_of_point_[point]; }

  std::span<const std::size_t> members(std::size_t cell) const {
    return {members_.data() + start_[cell], start_[cell + 1] - start_[cell]};
  }

  std::optional<std::size_t> find(const GridKey& key) const {
    const std::size_t c = index_.find(key);
    if (c == KeyIndex::npos) return std::nullopt;
    return c;
  }

  // Calls fn(cell) for every non-empty cell whose closed box is within
  // distance r of p. The cell containing p is always reported when present.
  template <class Fn>
  void for_each_cell_near(std::span<const double> p, double r, Fn&& fn) const {
    const GridKey own = grid_id(p, side_);
    std::array<std::int64_t, kMaxDimension> lo{};
    std::array<std::int64_t, kMaxDimension> hi{};
    double candidates = 1.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      lo[i] = std::min(own.id[i], floor_to_key((p[i] - r) / side_));
      hi[i] = std::max(own.id[i], floor_to_key((p[i] + r) / side_));
      candidates *= static_cast<double>(hi[i] - lo[i] + 1);
    }
    auto within = [&](const GridKey& key) {
      return key == own || point_cell_distance(p, key, side_) <= r;
    };
    if (candidates > static_cast<double>(cell_count())) {
      for (std::size_t c = 0; c < cell_count(); ++c) {
        if (within(key(c))) fn(c);
      }
      return;
    }
    GridKey key;
    for (std::size_t i = 0; i < dim_; ++i) key.id[i] = lo[i];
    while (true) {
      if (auto c = find(key); c && within(key)) fn(*c);
      std::size_t axis = 0;
      while (axis < dim_) {
        if (key.id[axis] < hi[axis]) {
          ++key.id[axis];
          break;
        }
        key.id[axis] = lo[axis];
        ++axis;
      }
      if (axis == dim_) break;
    }
  }

  // Every point stored in a cell within distance r of p.
  template <class Fn>
  void for_each_point_near(std::span<const double> p, double r, Fn&& fn) const {
    for_each_cell_near(p, r, [&](std::size_t c) {
      for (auto i : members(c)) fn(i);
    });
  }

  std::vector<GridKey> neighborhood_cells(std::span<const double> p, double r) const {
    if (!(r > 0.0)) throw InputError("neighborhood radius must be positive");
    std::vector<GridKey> out;
    for_each_cell_near(p, r, [&](std::size_t c) { out.push_back(key(c)); });
    return out;
  }

  // Calls fn(a, b) for every ordered pair of non-empty cells (a == b
  // included) whose closed boxes are within distance r. Stops as soon as fn
  // returns false. Picks between probing a stencil of key offsets and
  // scanning coarse buckets, whichever is estimated cheaper.
  template <class Fn>
  void for_each_cell_pair(double r, Fn&& fn) const {
    const double reach = std::floor(r / side_) + 1.0;
    if (!(reach < 1e9)) throw InputError("radius too large relative to grid sidelength");
    const auto k = static_cast<std::int64_t>(reach);
    const double r_units = r / side_;
    const double limit = r_units * r_units;

    // Coarse buckets of width k cells: every pair within reach lies in
    // adjacent buckets. Cells are sorted by bucket so each bucket is a range.
    auto bucket_of = [&](const GridKey& key) {
      GridKey b;
      for (std::size_t i = 0; i < dim_; ++i) {
        const std::int64_t v = key.id[i];
        b.id[i] = v >= 0 ? v / k : -((-v + k - 1) / k);
      }
      return b;
    };
    std::vector<std::pair<GridKey, std::size_t>> by_bucket(cell_count());
    for (std::size_t c = 0; c < cell_count(); ++c) by_bucket[c] = {bucket_of(key(c)), c};
    const std::size_t dim = dim_;
    std::sort(by_bucket.begin(), by_bucket.end(), [dim](const auto& x, const auto& y) {
      for (std::size_t i = 0; i < dim; ++i) {
        if (x.first.id[i] != y.first.id[i]) return x.first.id[i] < y.first.id[i];
      }
      return false;
    });
    std::vector<std::size_t> sorted_cells(cell_count());
    std::vector<GridKey> sorted_keys(cell_count());
    std::vector<std::size_t> bucket_start;
    std::vector<GridKey> bucket_key;
    bucket_start.reserve(cell_count() + 1);
    bucket_key.reserve(cell_count());
    for (std::size_t i = 0; i < by_bucket.size(); ++i) {
      if (i == 0 || !(by_bucket[i].first == by_bucket[i - 1].first)) {
        bucket_start.push_back(i);
        bucket_key.push_back(by_bucket[i].first);
      }
      sorted_cells[i] = by_bucket[i].second;
      sorted_keys[i] = key(by_bucket[i].second);
    }
    bucket_start.push_back(by_bucket.size());
    const std::size_t bucket_count = bucket_key.size();
    auto bucket_size = [&](std::size_t b) { return bucket_start[b + 1] - bucket_start[b]; };

    // Shifting every key by the same offset keeps lexicographic order, so
    // one merge sweep per offset finds all neighboring buckets.
    std::vector<std::pair<std::size_t, std::size_t>> adjacent;
    double bucket_cost = 0.0;
    std::array<int, kMaxDimension> off{};
    for (std::size_t i = 0; i < dim_; ++i) off[i] = -1;
    while (true) {
      // Sign of key[j] - (key[b] + off) in lexicographic order.
      auto compare = [&](std::size_t j, std::size_t b) {
        for (std::size_t i = 0; i < dim; ++i) {
          const std::int64_t t = bucket_key[b].id[i] + off[i];
          if (bucket_key[j].id[i] != t) return bucket_key[j].id[i] < t ? -1 : 1;
        }
        return 0;
      };
      std::size_t j = 0;
      for (std::size_t b = 0; b < bucket_count && j < bucket_count; ++b) {
        int c = -1;
        while (j < bucket_count && (c = compare(j, b)) < 0) ++j;
        if (j < bucket_count && c == 0) {
          adjacent.emplace_back(b, j);
          bucket_cost += static_cast<double>(bucket_size(b) * bucket_size(j));
        }
      }
      std::size_t axis = 0;
      while (axis < dim_) {
        if (off[axis] < 1) {
          ++off[axis];
          break;
        }
        off[axis] = -1;
        ++axis;
      }
      if (axis == dim_) break;
    }

    const std::size_t stencil_span = static_cast<std::size_t>(2 * k + 1);
    double stencil_size = 1.0;
    for (std::size_t i = 0; i < dim_; ++i) stencil_size *= static_cast<double>(stencil_span);
    const double stencil_cost = stencil_size * static_cast<double>(cell_count());

    if (stencil_cost < bucket_cost) {
      std::vector<std::array<std::int64_t, kMaxDimension>> offsets;
      std::array<std::int64_t, kMaxDimension> off{};
      for (std::size_t i = 0; i < dim_; ++i) off[i] = -k;
      while (true) {
        double g = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
          const double a = static_cast<double>(std::max<std::int64_t>(0, std::abs(off[i]) - 1));
          g += a * a;
        }
        if (g <= limit) offsets.push_back(off);
        std::size_t axis = 0;
        while (axis < dim_) {
          if (off[axis] < k) {
            ++off[axis];
            break;
          }
          off[axis] = -k;
          ++axis;
        }
        if (axis == dim_) break;
      }
      for (std::size_t a = 0; a < cell_count(); ++a) {
        GridKey probe = key(a);
        for (const auto& o : offsets) {
          for (std::size_t i = 0; i < dim_; ++i) probe.id[i] = key(a).id[i] + o[i];
          if (auto b = find(probe)) {
            if (!fn(a, *b)) return;
          }
        }
      }
      return;
    }

    for (const auto& [b, c] : adjacent) {
      for (std::size_t x = bucket_start[b]; x < bucket_start[b + 1]; ++x) {
        for (std::size_t y = bucket_start[c]; y < bucket_start[c + 1]; ++y) {
          if (static_cast<double>(cell_gap_squared(sorted_keys[x], sorted_keys[y], dim_)) <= limit &&
              !fn(sorted_cells[x], sorted_cells[y])) {
            return;
          }
        }
      }
    }
  }

 private:
  double side_;
  std::size_t dim_;
  KeyIndex index_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> cell_of_point_;
};

inline Grid build_grid(const PointSet& points, double sidelength) { return Grid(points, sidelength); }

}  // namespace netprune
