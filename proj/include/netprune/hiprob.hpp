#pragma once

// A middle-rank nearest-neighbor distance in linear time with high
// probability. Plugged into the driver as its radius sampler, it makes the
// running time bound hold with high probability instead of in expectation.
//
// Every routine here treats the input as a set of distinct locations and
// ignores weights: d(p) is the distance from p to the nearest other point.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/framework.hpp"
#include "netprune/geom.hpp"
#include "netprune/nets.hpp"
#include "netprune/problems/connectivity.hpp"
#include "netprune/problems/nearest_neighbor.hpp"

namespace netprune {

struct HpConstants {
  double sample_x = 4.0;        // |X| = sample_x * ln n in the distance estimate
  double sample_s = 8.0;        // |S| = sample_s * n / ln n in the distance estimate
  double cluster_cap = 16.0;    // small clusters hold at most cluster_cap * ln^2 n points
  double rank_samples = 8.0;    // rank estimates draw rank_samples * ln n values
  std::size_t brute_force_below = 32;
  std::size_t max_attempts = 10;
};

inline double log_squared_count(std::size_t n) {
  const double l = std::log(static_cast<double>(n));
  return std::ceil(l * l);
}

inline std::size_t scaled_log_count(double c, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(c * std::log(static_cast<double>(n))));
}

// All nearest-neighbor distances, by full scan.
inline std::vector<double> all_nn_distances_brute(const PointSet& points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = nearest_distance(points, i);
  return out;
}

inline double rank_value(std::vector<double> values, std::size_t rank) {
  if (rank < 1 || rank > values.size()) throw InputError("rank out of range");
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

enum class SampleMode { WithReplacement, Whole };

// Element of rank floor(alpha * t) in a sample of t values drawn uniformly
// with replacement. `Whole` ranks the full multiset instead (t = size).
inline double sample_rank_value(std::span<const double> values, std::size_t t, double alpha, std::mt19937_64& rng,
                                SampleMode mode = SampleMode::WithReplacement) {
  if (values.empty()) throw InputError("empty multiset");
  if (mode == SampleMode::Whole) t = values.size();
  const auto rank = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(t)));
  if (rank < 1 || rank > t) throw InputError("rank floor(alpha * t) must be in [1, t]");
  if (mode == SampleMode::Whole) return rank_value({values.begin(), values.end()}, rank);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> sample(t);
  for (auto& v : sample) v = values[pick(rng)];
  return rank_value(std::move(sample), rank);
}

// Number of points whose nearest neighbor is closer than r.
inline std::size_t count_nn_below(const PointSet& points, double r) {
  return del_far(points, r, DuplicateMode::Collapsed).close.size();
}

// Three-way comparison of r against the t-th smallest NN distance D,
// t = floor(alpha * n): Above(r) means D >= r, Below(r) means D < r/2,
// Bounded means D in [r/2, r].
inline DeciderOutcome decider_m(const PointSet& points, double r, double alpha) {
  check_radius(r);
  const std::size_t n = points.size();
  if (n < 2) throw InputError("need at least two points");
  const auto t = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
  if (t < 1 || t > n) throw InputError("rank floor(alpha * n) must be in [1, n]");
  if (count_nn_below(points, r) < t) return DeciderOutcome::above(r);
  if (count_nn_below(points, r / 2.0) >= t) return DeciderOutcome::below(r);
  return DeciderOutcome::bounded(r / 2.0, r);
}

struct DistanceEstimate {
  double value = 0.0;
  std::vector<std::size_t> x;  // query sample
  std::vector<std::size_t> s;  // reference sample
};

inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (count >= n) return all;
  std::vector<std::size_t> out;
  out.reserve(count);
  std::sample(all.begin(), all.end(), std::back_inserter(out), count, rng);
  return out;
}

// Rank-|X|/4 value of d(x, S) over a small query sample X and a large
// reference sample S. Samples saturate to the whole set for small n.
inline DistanceEstimate est_log_dist(const PointSet& points, const HpConstants& hp, std::mt19937_64& rng) {
  const std::size_t n = points.size();
  if (n < 2) throw InputError("need at least two points");
  DistanceEstimate est;
  const double ln = std::log(static_cast<double>(n));
  est.x = sample_indices(n, scaled_log_count(hp.sample_x, n), rng);
  est.s = sample_indices(n, static_cast<std::size_t>(std::ceil(hp.sample_s * static_cast<double>(n) / ln)), rng);
  std::vector<double> d;
  d.reserve(est.x.size());
  for (auto i : est.x) {
    double best = std::numeric_limits<double>::infinity();
    for (auto j : est.s) {
      if (j != i) best = std::min(best, squared_distance(points.point(i), points.point(j)));
    }
    d.push_back(length_from_squared(best));
  }
  est.value = rank_value(std::move(d), std::max<std::size_t>(1, est.x.size() / 4));
  if (!std::isfinite(est.value)) throw RetryableFailure("distance estimate found no reference point");
  return est;
}

// Requires the rank-1/2 .. rank-3/4 NN distances to lie in [r, R]. Returns
// the exact NN distance of a point whose approximate NN distance has
// rank 5/8 in a sample.
inline double low_spread(const PointSet& points, double r, double big_r, const HpConstants& hp, std::mt19937_64& rng) {
  check_radius(r);
  check_radius(big_r);
  const std::size_t n = points.size();
  const NetResult net = compute_net(points, r / 8.0);
  const PointSet& s = net.net;
  const Grid grid(s, big_r);

  // Net points stand for the input points they absorbed.
  std::vector<double> weights(s.size(), 0.0);
  for (auto c : net.assignment) weights[c] += 1.0;
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const std::size_t t = std::max<std::size_t>(1, scaled_log_count(hp.rank_samples, n));

  std::vector<std::pair<double, std::size_t>> z;
  z.reserve(t);
  for (std::size_t k = 0; k < t; ++k) {
    const std::size_t q = pick(rng);
    double best = std::numeric_limits<double>::infinity();
    if (weights[q] > 1.0) {
      best = 0.0;
    } else {
      grid.for_each_point_near(s.point(q), 2.0 * big_r, [&](std::size_t j) {
        if (j != q) best = std::min(best, squared_distance(s.point(q), s.point(j)));
      });
      best = length_from_squared(best);
    }
    z.emplace_back(best, q);
  }
  const std::size_t rank = std::max<std::size_t>(1, (5 * z.size()) / 8);
  std::nth_element(z.begin(), z.begin() + (rank - 1), z.end());
  if (!std::isfinite(z[rank - 1].first)) throw RetryableFailure("sampled point has no neighbor in range");
  return nearest_distance(points, net.centers[z[rank - 1].second]);
}

struct SmallComponents {
  double value = 0.0;
  std::size_t population = 0;  // points in small non-trivial clusters
};

// Median NN distance over points of small, non-singleton clusters of a
// connectivity partition at scale nu / (8 ln^2 n), each NN found by scanning
// the point's own cluster.
inline SmallComponents small_comp(double nu, const PointSet& points, const HpConstants& hp, std::mt19937_64& rng) {
  check_radius(nu);
  const std::size_t n = points.size();
  const double m = log_squared_count(n);
  const double rho = nu / (8.0 * m);
  const Partition part = connectivity_partition(points, rho, 1.0);
  const auto clusters = part.clusters();
  const double cap = hp.cluster_cap * std::log(static_cast<double>(n)) * std::log(static_cast<double>(n));

  std::vector<std::size_t> pool;
  for (const auto& c : clusters) {
    if (c.size() >= 2 && static_cast<double>(c.size()) <= cap) pool.insert(pool.end(), c.begin(), c.end());
  }
  if (pool.empty()) throw RetryableFailure("no small non-trivial clusters");

  SmallComponents out;
  out.population = pool.size();
  const std::size_t t = std::max<std::size_t>(1, scaled_log_count(hp.rank_samples, n));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<double> z(t);
  for (auto& v : z) {
    const std::size_t p = pool[pick(rng)];
    double best = std::numeric_limits<double>::infinity();
    for (auto q : clusters[part.cluster_of[p]]) {
      if (q != p) best = std::min(best, squared_distance(points.point(p), points.point(q)));
    }
    v = length_from_squared(best);
  }
  out.value = rank_value(std::move(z), (t + 1) / 2);
  return out;
}

enum class MidNnBranch { BruteForce, Estimate, Bracketed, LowSpread, SmallComponents, Fallback };

inline const char* to_string(MidNnBranch b) {
  switch (b) {
    case MidNnBranch::BruteForce: return "brute-force";
    case MidNnBranch::Estimate: return "estimate";
    case MidNnBranch::Bracketed: return "bracketed";
    case MidNnBranch::LowSpread: return "low-spread";
    case MidNnBranch::SmallComponents: return "small-components";
    case MidNnBranch::Fallback: return "fallback";
  }
  return "?";
}

struct MidNn {
  double value = 0.0;
  MidNnBranch branch = MidNnBranch::BruteForce;
  std::size_t attempts = 0;
};

inline MidNn median_nn_exact(const PointSet& points, MidNnBranch branch) {
  const std::size_t n = points.size();
  const std::uint64_t k = (n + 1) / 2;
  double v = 0.0;
  if (branch == MidNnBranch::BruteForce) {
    v = rank_value(all_nn_distances_brute(points), k);
  } else {
    PointSet unit(points.dimension());
    unit.reserve(n);
    for (std::size_t i = 0; i < n; ++i) unit.push_back(points.point(i));
    v = exact_kth_nn(unit, k).value;
  }
  return {v, branch, 0};
}

// A value within a constant factor of some NN distance whose rank lies
// between n/32 and 31n/32.
inline MidNn mid_nn(const PointSet& points, const HpConstants& hp, std::mt19937_64& rng) {
  const std::size_t n = points.size();
  if (n < 2) throw InputError("need at least two points");
  if (n < std::max<std::size_t>(hp.brute_force_below, 2)) return median_nn_exact(points, MidNnBranch::BruteForce);

  for (std::size_t attempt = 1; attempt <= hp.max_attempts; ++attempt) {
    try {
      const double nu = est_log_dist(points, hp, rng).value;
      const DeciderOutcome res = decider_m(points, nu, 0.75);
      if (res.is_bounded()) return {res.lo, MidNnBranch::Bracketed, attempt};
      if (res.is_above()) {
        // Counting distances equal to nu keeps a tied lattice value.
        const std::size_t at_most = count_nn_below(points, std::nextafter(nu, std::numeric_limits<double>::infinity()));
        if (at_most < std::max<std::size_t>(1, n / 8)) continue;
        return {nu, MidNnBranch::Estimate, attempt};
      }
      const double small = nu / (64.0 * log_squared_count(n));
      const DeciderOutcome low = decider_m(points, small, 0.5);
      if (low.is_bounded()) return {low.lo, MidNnBranch::Bracketed, attempt};
      if (low.is_above()) return {low_spread(points, small / 4.0, 4.0 * nu, hp, rng), MidNnBranch::LowSpread, attempt};
      return {small_comp(nu, points, hp, rng).value, MidNnBranch::SmallComponents, attempt};
    } catch (const RetryableFailure&) {
    }
  }
  MidNn out = median_nn_exact(points, MidNnBranch::Fallback);
  out.attempts = hp.max_attempts;
  return out;
}

// Turns a mid_nn value x into an exact NN distance of middle rank. Cells of
// diameter x/C hold every point with a smaller NN distance alongside a
// neighbor; lonely points get their exact NN distance up to C*x, which
// fixes the global rank of every distance in (x/C, C*x].
inline MidNn mid_nn_exact(const PointSet& points, const HpConstants& hp, std::mt19937_64& rng) {
  const std::size_t n = points.size();
  MidNn approx = mid_nn(points, hp, rng);
  if (approx.branch == MidNnBranch::BruteForce || approx.branch == MidNnBranch::Fallback) return approx;
  const double x = approx.value;
  if (!(x > 0.0)) throw ContractError("mid_nn returned a non-positive value");

  const double lo_rank = std::ceil(static_cast<double>(n) / 32.0);
  const double hi_rank = std::floor(31.0 * static_cast<double>(n) / 32.0);
  const double target = static_cast<double>(n) / 2.0;
  for (double c : {4.0, 16.0, 64.0}) {
    const double small = x / c;
    const double big = c * x;
    const Grid fine(points, side_for_diameter(small, points.dimension()));
    const Grid coarse(points, big);
    std::size_t at_most_small = 0;
    std::vector<double> exact;
    for (std::size_t i = 0; i < n; ++i) {
      if (fine.members(fine.cell_of(i)).size() > 1) {
        ++at_most_small;
        continue;
      }
      const auto p = points.point(i);
      double best = std::numeric_limits<double>::infinity();
      coarse.for_each_point_near(p, big, [&](std::size_t j) {
        if (j != i) best = std::min(best, squared_distance(p, points.point(j)));
      });
      best = length_from_squared(best);
      if (best <= small) {
        ++at_most_small;
      } else if (best <= big) {
        exact.push_back(best);
      }
    }
    std::sort(exact.begin(), exact.end());
    double chosen = 0.0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < exact.size(); ++j) {
      // Ties share the rank of their last copy's position.
      std::size_t last = j;
      while (last + 1 < exact.size() && exact[last + 1] == exact[j]) ++last;
      const double first_rank = static_cast<double>(at_most_small + j + 1);
      const double last_rank = static_cast<double>(at_most_small + last + 1);
      if (last_rank >= lo_rank && first_rank <= hi_rank) {
        const double gap = std::max({0.0, first_rank - target, target - last_rank});
        if (gap < best_gap) {
          best_gap = gap;
          chosen = exact[j];
        }
      }
      j = last;
    }
    if (std::isfinite(best_gap)) return {chosen, approx.branch, approx.attempts};
  }
  MidNn out = median_nn_exact(points, MidNnBranch::Fallback);
  out.attempts = approx.attempts;
  return out;
}

inline MidNn mid_nn_exact(const PointSet& points, const HpConstants& hp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return mid_nn_exact(points, hp, rng);
}

// Radius sampler for the driver: a middle-rank NN distance while the
// instance is large, a uniformly sampled one once it has shrunk below
// n0 / ln n0 points.
inline RadiusSampler make_hp_sampler(std::size_t initial_size, HpConstants hp = {}) {
  const double n0 = static_cast<double>(std::max<std::size_t>(initial_size, 3));
  const auto threshold = static_cast<std::size_t>(n0 / std::log(n0));
  return [hp, threshold](const PointSet& points, std::mt19937_64& rng) {
    if (points.size() >= std::max(threshold, hp.brute_force_below)) return mid_nn_exact(points, hp, rng).value;
    return uniform_nn_radius(points, rng);
  };
}

}  // namespace netprune
