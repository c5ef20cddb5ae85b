#pragma once

// Brute-force reference answers, quadratic or exhaustive. Weighted points
// are expanded into their unit copies wherever the definition counts them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/geom.hpp"
#include "netprune/problems/connectivity.hpp"
#include "netprune/sketch.hpp"

namespace netprune::oracle {

// All binom(W, 2) pairwise distances of unit points, ascending.
inline std::vector<double> pairwise_distances(const PointSet& p) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::uint64_t w = p.weight(i);
    out.insert(out.end(), w * (w - 1) / 2, 0.0);
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      out.insert(out.end(), w * p.weight(j), distance(p.point(i), p.point(j)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double kth_distance(const PointSet& p, std::uint64_t k) {
  const auto d = pairwise_distances(p);
  if (k < 1 || k > d.size()) throw InfeasibleError("k out of range");
  return d[k - 1];
}

// d_m of every unit point, ascending; infinite when fewer than m others exist.
inline std::vector<double> mnn_distances(const PointSet& p, std::uint64_t m) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<std::pair<double, std::uint64_t>> others;
    if (p.weight(i) > 1) others.emplace_back(0.0, p.weight(i) - 1);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j != i) others.emplace_back(distance(p.point(i), p.point(j)), p.weight(j));
    }
    std::sort(others.begin(), others.end());
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t seen = 0;
    for (const auto& [d, w] : others) {
      seen += w;
      if (seen >= m) {
        value = d;
        break;
      }
    }
    out.insert(out.end(), p.weight(i), value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double kth_mnn(const PointSet& p, std::uint64_t k, std::uint64_t m) {
  const auto d = mnn_distances(p, m);
  if (k < 1 || k > d.size()) throw InfeasibleError("k out of range");
  return d[k - 1];
}

inline double kth_nn(const PointSet& p, std::uint64_t k) { return kth_mnn(p, k, 1); }

// Bichromatic values d(r, blue) for every red unit point, ascending.
inline std::vector<double> bichromatic_nn_distances(const PointSet& red, const PointSet& blue) {
  std::vector<double> out;
  for (std::size_t i = 0; i < red.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < blue.size(); ++j) best = std::min(best, distance(red.point(i), blue.point(j)));
    out.insert(out.end(), red.weight(i), best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Minimum spanning tree edge lengths over unit points, ascending. Copies of
// a location contribute zero-length edges.
inline std::vector<double> mst_edges(const PointSet& p) {
  const std::size_t n = p.size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), p.weight(i) - 1, 0.0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in(n, false);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i] && (u == n || best[i] < best[u])) u = i;
    }
    in[u] = true;
    if (step > 0) out.push_back(best[u]);
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i]) best[i] = std::min(best[i], distance(p.point(u), p.point(i)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double mst_kth_edge(const PointSet& p, std::uint64_t k, bool shortest) {
  const auto e = mst_edges(p);
  if (k < 1 || k > e.size()) throw InfeasibleError("k out of range");
  return shortest ? e[k - 1] : e[e.size() - k];
}

// Components of the graph joining points at distance <= r.
inline Partition threshold_components(const PointSet& p, double r) {
  DisjointSets sets(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (distance(p.point(i), p.point(j)) <= r) sets.unite(i, j);
    }
  }
  Partition part;
  part.cluster_of.resize(p.size());
  std::vector<std::size_t> label(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto& l = label[sets.find(i)];
    if (l == p.size()) l = part.cluster_count++;
    part.cluster_of[i] = l;
  }
  return part;
}

// True when every cluster of `fine` lies inside one cluster of `coarse`.
inline bool refines(const Partition& fine, const Partition& coarse) {
  std::vector<std::size_t> image(fine.cluster_count, coarse.cluster_count);
  for (std::size_t i = 0; i < fine.cluster_of.size(); ++i) {
    auto& img = image[fine.cluster_of[i]];
    if (img == coarse.cluster_count) {
      img = coarse.cluster_of[i];
    } else if (img != coarse.cluster_of[i]) {
      return false;
    }
  }
  return true;
}

inline double nearest_center_radius(const PointSet& p, std::span<const std::size_t> centers) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (auto c : centers) best = std::min(best, distance(p.point(i), p.point(c)));
    worst = std::max(worst, best);
  }
  return worst;
}

// Optimal k-center radius over all center subsets of the locations.
inline double kcenter(const PointSet& p, std::size_t k) {
  const std::size_t n = p.size();
  if (k == 0) throw InputError("k must be positive");
  if (k >= n) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == k) {
      best = std::min(best, nearest_center_radius(p, pick));
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return best;
}

inline double closest_pair(const PointSet& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.weight(i) > 1) return 0.0;
    for (std::size_t j = i + 1; j < p.size(); ++j) best = std::min(best, distance(p.point(i), p.point(j)));
  }
  return best;
}

// Over raw rows: smallest distance between rows at different locations.
inline double smallest_nonzero_distance(const PointSet& rows) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double d = distance(rows.point(i), rows.point(j));
      if (d > 0.0) best = std::min(best, d);
    }
  }
  if (!std::isfinite(best)) throw InfeasibleError("all points coincide");
  return best;
}

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

// Center of the smallest sphere through the given points, inside their
// affine hull; nullopt when they are affinely dependent.
inline std::optional<Ball> circumball(const PointSet& p, std::span<const std::size_t> support) {
  const std::size_t dim = p.dimension();
  const auto base = p.point(support[0]);
  const std::size_t s = support.size() - 1;
  Ball ball{std::vector<double>(base.begin(), base.end()), 0.0};
  if (s == 0) return ball;
  std::vector<std::vector<double>> v(s, std::vector<double>(dim));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t a = 0; a < dim; ++a) v[i][a] = p.point(support[i + 1])[a] - base[a];
  }
  // Gram system: 2 <v_i, v_j> lambda_j = |v_i|^2.
  std::vector<std::vector<double>> m(s, std::vector<double>(s + 1));
  for (std::size_t i = 0; i < s; ++i) {
    double norm = 0.0;
    for (std::size_t a = 0; a < dim; ++a) norm += v[i][a] * v[i][a];
    for (std::size_t j = 0; j < s; ++j) {
      double dot = 0.0;
      for (std::size_t a = 0; a < dim; ++a) dot += v[i][a] * v[j][a];
      m[i][j] = 2.0 * dot;
    }
    m[i][s] = norm;
  }
  for (std::size_t col = 0; col < s; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < s; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-12) return std::nullopt;
    std::swap(m[col], m[piv]);
    for (std::size_t r = 0; r < s; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= s; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (std::size_t i = 0; i < s; ++i) {
    const double lambda = m[i][s] / m[i][i];
    for (std::size_t a = 0; a < dim; ++a) ball.center[a] += lambda * v[i][a];
  }
  ball.radius = distance(ball.center, base);
  return ball;
}

// Smallest ball whose point set is a member, over circumballs of every
// support of at most d + 1 locations. Returns the radius.
template <SketchFamily F>
double min_ball(const PointSet& p, std::span<const typename F::Sketch> sketches, const F& family) {
  const std::size_t n = p.size();
  const std::size_t max_support = std::min(n, p.dimension() + 1);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pick.empty()) {
      if (auto ball = circumball(p, pick); ball && ball->radius < best) {
        const double reach = ball->radius * (1.0 + 1e-9) + 1e-12;
        auto s = family.empty();
        for (std::size_t i = 0; i < n; ++i) {
          if (distance(p.point(i), ball->center) <= reach) s = family.combine(s, sketches[i]);
        }
        if (family.member(s)) best = ball->radius;
      }
    }
    if (pick.size() == max_support) return;
    for (std::size_t i = start; i < n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

struct Edge {
  double length;
  std::size_t a;
  std::size_t b;
};

inline std::vector<Edge> sorted_edges(const PointSet& p) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) edges.push_back({distance(p.point(i), p.point(j)), i, j});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.length < y.length; });
  return edges;
}

// Smallest r at which some threshold-graph component is a member.
template <SketchFamily F>
double min_component(const PointSet& p, std::span<const typename F::Sketch> sketches, const F& family) {
  std::vector<typename F::Sketch> comp(sketches.begin(), sketches.end());
  for (const auto& s : comp) {
    if (family.member(s)) return 0.0;
  }
  DisjointSets sets(p.size());
  for (const auto& e : sorted_edges(p)) {
    const std::size_t ra = sets.find(e.a);
    const std::size_t rb = sets.find(e.b);
    if (ra == rb) continue;
    const auto merged = family.combine(comp[ra], comp[rb]);
    sets.unite(ra, rb);
    comp[sets.find(ra)] = merged;
    if (family.member(merged)) return e.length;
  }
  throw InfeasibleError("no component is ever a member");
}

// Smallest r at which every threshold-graph component is a member.
template <SketchFamily F>
double connected_cluster(const PointSet& p, std::span<const typename F::Sketch> sketches, const F& family) {
  std::vector<typename F::Sketch> comp(sketches.begin(), sketches.end());
  std::size_t failing = 0;
  for (const auto& s : comp) failing += family.member(s) ? 0 : 1;
  if (failing == 0) return 0.0;
  DisjointSets sets(p.size());
  for (const auto& e : sorted_edges(p)) {
    const std::size_t ra = sets.find(e.a);
    const std::size_t rb = sets.find(e.b);
    if (ra == rb) continue;
    failing -= (family.member(comp[ra]) ? 0 : 1) + (family.member(comp[rb]) ? 0 : 1);
    const auto merged = family.combine(comp[ra], comp[rb]);
    sets.unite(ra, rb);
    comp[sets.find(ra)] = merged;
    failing += family.member(merged) ? 0 : 1;
    if (failing == 0) return e.length;
  }
  throw InfeasibleError("the whole set is not a member");
}

inline constexpr std::size_t kMaxPartitionPoints = 10;

// Optimal min-max clustering cost by enumerating every set partition. A
// cluster costs the radius of its smallest ball centered at one of its
// points.
template <SketchFamily F>
double minmax_cluster(const PointSet& p, std::span<const typename F::Sketch> sketches, const F& family) {
  const std::size_t n = p.size();
  if (n > kMaxPartitionPoints) throw InputError("exhaustive partition search is capped at 10 points");
  std::vector<std::size_t> block(n, 0);
  double best = std::numeric_limits<double>::infinity();
  auto cost_of = [&](std::size_t blocks) {
    double worst = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      auto s = family.empty();
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (block[i] == b) {
          members.push_back(i);
          s = family.combine(s, sketches[i]);
        }
      }
      if (!family.member(s)) return std::numeric_limits<double>::infinity();
      double radius = std::numeric_limits<double>::infinity();
      for (auto c : members) {
        double far = 0.0;
        for (auto i : members) far = std::max(far, distance(p.point(c), p.point(i)));
        radius = std::min(radius, far);
      }
      worst = std::max(worst, radius);
      if (worst >= best) return worst;
    }
    return worst;
  };
  // Restricted growth strings enumerate each partition once.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      best = std::min(best, cost_of(blocks));
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      block[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  if (!std::isfinite(best)) throw InfeasibleError("no partition into members exists");
  return best;
}

}  // namespace netprune::oracle
