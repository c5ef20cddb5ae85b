#pragma once

// Upward-closed set families with constant-size mergeable summaries.
//
// A family supplies: empty(), sketch_of(attributes, weight) for one input
// row, combine(a, b) for disjoint sets, and member(s). Membership must be
// upward closed: a superset of a member is a member.

#include <bit>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/nets.hpp"

namespace netprune {

struct PointAttributes {
  std::uint32_t color = 0;
  bool flag = false;
  std::vector<double> values;
};

template <class F>
concept SketchFamily = requires(const F& f, const PointAttributes& a, std::uint64_t w,
                                const typename F::Sketch& s) {
  typename F::Sketch;
  { f.empty() } -> std::same_as<typename F::Sketch>;
  { f.sketch_of(a, w) } -> std::same_as<typename F::Sketch>;
  { f.combine(s, s) } -> std::same_as<typename F::Sketch>;
  { f.member(s) } -> std::convertible_to<bool>;
};

// Sets holding at least `count` unit points.
struct AtLeastPoints {
  using Sketch = std::uint64_t;
  std::uint64_t count = 1;

  Sketch empty() const { return 0; }
  Sketch sketch_of(const PointAttributes&, std::uint64_t w) const { return w; }
  Sketch combine(Sketch a, Sketch b) const { return a + b; }
  bool member(Sketch s) const { return s >= count; }
};

// Sets whose total weight reaches a real threshold.
struct WeightAtLeast {
  using Sketch = double;
  double alpha = 1.0;

  Sketch empty() const { return 0.0; }
  Sketch sketch_of(const PointAttributes&, std::uint64_t w) const { return static_cast<double>(w); }
  Sketch combine(Sketch a, Sketch b) const { return a + b; }
  bool member(Sketch s) const { return s >= alpha; }
};

inline constexpr std::uint32_t kMaxColors = 64;

// Sets showing at least `min_colors` distinct colors.
struct ColorCoverage {
  using Sketch = std::uint64_t;
  std::uint32_t min_colors = 1;

  Sketch empty() const { return 0; }
  Sketch sketch_of(const PointAttributes& a, std::uint64_t) const {
    if (a.color >= kMaxColors) throw InputError("colors must be below " + std::to_string(kMaxColors));
    return std::uint64_t{1} << a.color;
  }
  Sketch combine(Sketch a, Sketch b) const { return a | b; }
  bool member(Sketch s) const { return static_cast<std::uint32_t>(std::popcount(s)) >= min_colors; }
};

// Sets containing a flagged point.
struct ContainsFlagged {
  using Sketch = std::uint8_t;

  Sketch empty() const { return 0; }
  Sketch sketch_of(const PointAttributes& a, std::uint64_t) const { return a.flag ? 1 : 0; }
  Sketch combine(Sketch a, Sketch b) const { return a | b; }
  bool member(Sketch s) const { return s != 0; }
};

// Sets whose summed attribute vector x satisfies row . x >= bound for every
// constraint. Attributes and coefficients must be non-negative.
struct LinearInequalities {
  using Sketch = std::vector<double>;

  struct Constraint {
    std::vector<double> coefficients;
    double bound = 0.0;
  };

  std::size_t attribute_count = 0;
  std::vector<Constraint> constraints;

  LinearInequalities() = default;
  LinearInequalities(std::size_t attrs, std::vector<Constraint> rows)
      : attribute_count(attrs), constraints(std::move(rows)) {
    for (const auto& c : constraints) {
      if (c.coefficients.size() != attribute_count) throw InputError("constraint width mismatch");
      for (double v : c.coefficients) {
        if (!(v >= 0.0)) throw InputError("constraint coefficients must be non-negative");
      }
    }
  }

  Sketch empty() const { return Sketch(attribute_count, 0.0); }
  Sketch sketch_of(const PointAttributes& a, std::uint64_t w) const {
    if (a.values.size() != attribute_count) throw InputError("attribute count mismatch");
    Sketch s(attribute_count);
    for (std::size_t i = 0; i < attribute_count; ++i) {
      if (!(a.values[i] >= 0.0)) throw InputError("attributes must be non-negative");
      s[i] = a.values[i] * static_cast<double>(w);
    }
    return s;
  }
  Sketch combine(const Sketch& a, const Sketch& b) const {
    Sketch s(a);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
    return s;
  }
  bool member(const Sketch& s) const {
    for (const auto& c : constraints) {
      double dot = 0.0;
      for (std::size_t i = 0; i < attribute_count; ++i) dot += c.coefficients[i] * s[i];
      if (dot < c.bound) return false;
    }
    return true;
  }
};

// One sketch per merged location, combining the rows that fell on it.
// `attributes` is either empty (all defaults) or one entry per row.
template <SketchFamily F>
std::vector<typename F::Sketch> location_sketches(const F& family, const PointSet& rows, const MergeResult& merged,
                                                 std::span<const PointAttributes> attributes) {
  if (!attributes.empty() && attributes.size() != rows.size()) throw InputError("one attribute record per row");
  const PointAttributes none;
  std::vector<typename F::Sketch> out(merged.locations.size(), family.empty());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& a = attributes.empty() ? none : attributes[i];
    const std::size_t g = merged.group_of_row[i];
    out[g] = family.combine(out[g], family.sketch_of(a, rows.weight(i)));
  }
  return out;
}

template <SketchFamily F>
typename F::Sketch combine_all(const F& family, std::span<const typename F::Sketch> sketches) {
  auto s = family.empty();
  for (const auto& x : sketches) s = family.combine(s, x);
  return s;
}

}  // namespace netprune
