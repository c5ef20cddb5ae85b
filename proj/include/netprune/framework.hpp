#pragma once

// The net-and-prune driver: turns a decision procedure for a distance
// problem into an interval containing the optimum, in expected linear time,
// and sharpens such intervals with a handful of extra decider calls.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/geom.hpp"
#include "netprune/nets.hpp"

namespace netprune {

inline constexpr double kNetFactor = 37.0;
inline constexpr double kNetDecay = 28.0;  // every net radius is at most f / kNetDecay

enum class OutcomeKind { Below, Above, Bounded };

// Below: f < r. Above: f > r. Bounded: f in [lo, hi].
struct DeciderOutcome {
  OutcomeKind kind = OutcomeKind::Below;
  double r = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static DeciderOutcome below(double r) { return {OutcomeKind::Below, r, 0.0, 0.0}; }
  static DeciderOutcome above(double r) { return {OutcomeKind::Above, r, 0.0, 0.0}; }
  static DeciderOutcome bounded(double lo, double hi) { return {OutcomeKind::Bounded, 0.0, lo, hi}; }

  bool is_below() const { return kind == OutcomeKind::Below; }
  bool is_above() const { return kind == OutcomeKind::Above; }
  bool is_bounded() const { return kind == OutcomeKind::Bounded; }
};

inline const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Below: return "below";
    case OutcomeKind::Above: return "above";
    case OutcomeKind::Bounded: return "bounded";
  }
  return "?";
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double spread() const { return hi / lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

template <class Ctx>
struct NdpInstance {
  PointSet points;
  Ctx context;
};

template <class P>
concept NdpProblem = requires(const P& problem, double r, const NdpInstance<typename P::Context>& inst,
                              const FarCloseSplit& split) {
  typename P::Context;
  { problem.phi() } -> std::convertible_to<double>;
  { problem.decide(r, inst) } -> std::same_as<DeciderOutcome>;
  { problem.update_context_on_prune(inst, split) } -> std::same_as<typename P::Context>;
};

// A problem whose decider accepts a per-call accuracy.
template <class P>
concept EpsDecidable = NdpProblem<P> && requires(const P& problem, double r, double eps,
                                                 const NdpInstance<typename P::Context>& inst) {
  { problem.decide(r, inst, eps) } -> std::same_as<DeciderOutcome>;
};

template <class P>
concept HasZeroScreen = NdpProblem<P> && requires(const P& problem,
                                                  const NdpInstance<typename P::Context>& inst) {
  { problem.is_zero(inst) } -> std::convertible_to<bool>;
};

template <class P>
concept HasNetUpdate = NdpProblem<P> && requires(const P& problem,
                                                 const NdpInstance<typename P::Context>& inst,
                                                 const NetResult& net) {
  { problem.update_context_on_net(inst, net) } -> std::same_as<typename P::Context>;
};

enum class DriverAction { Return, Net, Prune };

inline const char* to_string(DriverAction action) {
  switch (action) {
    case DriverAction::Return: return "return";
    case DriverAction::Net: return "net";
    case DriverAction::Prune: return "prune";
  }
  return "?";
}

struct TraceStep {
  double nu = 0.0;
  DeciderOutcome at_nu;
  DeciderOutcome at_scaled;  // decider at kNetFactor * nu
  DriverAction action = DriverAction::Return;
  std::size_t size_before = 0;
  std::size_t size_after = 0;
};

template <class Ctx>
struct RunTrace {
  std::vector<TraceStep> steps;
  // With snapshots enabled: the starting instance, then the instance left
  // after every net or prune step.
  std::vector<NdpInstance<Ctx>> snapshots;
};

template <class Ctx>
struct SolveResult {
  Interval interval;
  bool zero = false;  // the zero screen fired; interval is [0, 0]
  RunTrace<Ctx> trace;
};

// Returns the radius used for one driver iteration: a nearest-neighbor
// distance of some point of the current set.
using RadiusSampler = std::function<double(const PointSet&, std::mt19937_64&)>;

struct DriverOptions {
  std::uint64_t seed = 1;
  bool record_snapshots = false;
  RadiusSampler radius_sampler;  // empty: uniform random point
};

inline double uniform_nn_radius(const PointSet& points, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  return nearest_distance(points, pick(rng));
}

inline void validate_outcome(const DeciderOutcome& out, double r, double phi) {
  constexpr double kSlack = 1e-9;
  if (out.is_bounded()) {
    if (!(out.lo > 0.0) || !(out.lo <= out.hi) || !std::isfinite(out.hi)) {
      throw ContractError("decider returned a malformed interval");
    }
    if (out.hi > phi * out.lo * (1.0 + kSlack)) {
      throw ContractError("decider interval is wider than its guarantee");
    }
  } else if (out.r != r) {
    throw ContractError("decider answered for a different radius");
  }
}

template <NdpProblem P>
SolveResult<typename P::Context> ndp_solve(const P& problem, NdpInstance<typename P::Context> instance,
                                           const DriverOptions& options = {}) {
  using Ctx = typename P::Context;
  SolveResult<Ctx> result;
  if (instance.points.empty()) throw InputError("empty instance");
  if constexpr (HasZeroScreen<P>) {
    if (problem.is_zero(instance)) {
      result.zero = true;
      return result;
    }
  }
  if (instance.points.size() < 2) throw InputError("need at least two distinct locations");

  const double phi = problem.phi();
  std::mt19937_64 rng(options.seed);
  const RadiusSampler& sampler = options.radius_sampler ? options.radius_sampler : RadiusSampler(uniform_nn_radius);
  if (options.record_snapshots) result.trace.snapshots.push_back(instance);

  const std::size_t cap = instance.points.size() + 1;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    if (instance.points.size() < 2) {
      throw ContractError("driver reduced the instance to a single location");
    }
    TraceStep step;
    step.size_before = instance.points.size();
    step.nu = sampler(instance.points, rng);
    if (!(step.nu > 0.0) || !std::isfinite(step.nu)) throw ContractError("sampled radius is not positive");
    const double scaled = kNetFactor * step.nu;
    step.at_nu = problem.decide(step.nu, instance);
    step.at_scaled = problem.decide(scaled, instance);
    validate_outcome(step.at_nu, step.nu, phi);
    validate_outcome(step.at_scaled, scaled, phi);

    auto finish = [&](Interval iv) {
      step.action = DriverAction::Return;
      step.size_after = step.size_before;
      result.trace.steps.push_back(step);
      result.interval = iv;
      return result;
    };
    if (step.at_nu.is_below() && step.at_scaled.is_above()) {
      throw ContractError("decider claims f < r and f > 37r at once");
    }
    if (step.at_nu.is_bounded()) return finish({step.at_nu.lo / 2.0, 2.0 * step.at_nu.hi});
    if (step.at_scaled.is_bounded()) return finish({step.at_scaled.lo / 2.0, 2.0 * step.at_scaled.hi});
    if (step.at_nu.is_above() && step.at_scaled.is_below()) {
      return finish({step.nu / 2.0, 2.0 * kNetFactor * step.nu});
    }

    if (step.at_nu.is_below()) {
      const FarCloseSplit split = del_far(instance.points, step.nu);
      if (split.close.empty()) throw ContractError("prune removed every point");
      Ctx next = problem.update_context_on_prune(instance, split);
      instance.points = instance.points.subset(split.close);
      instance.context = std::move(next);
      step.action = DriverAction::Prune;
    } else {
      NetResult net = compute_net(instance.points, 3.0 * step.nu);
      if constexpr (HasNetUpdate<P>) {
        Ctx next = problem.update_context_on_net(instance, net);
        instance.context = std::move(next);
      }
      instance.points = std::move(net.net);
      step.action = DriverAction::Net;
    }
    step.size_after = instance.points.size();
    result.trace.steps.push_back(step);
    if (options.record_snapshots) result.trace.snapshots.push_back(instance);
  }
  throw ContractError("driver exceeded its iteration cap");
}

// Narrows an interval containing f to spread at most phi by binary search
// over the geometric ladder lo, phi*lo, phi^2*lo, ..., hi.
template <NdpProblem P>
Interval refine_phi(const P& problem, const NdpInstance<typename P::Context>& instance, Interval iv) {
  const double phi = problem.phi();
  if (!(phi > 1.0)) throw InputError("refinement needs phi > 1");
  if (!(iv.lo > 0.0) || !(iv.lo <= iv.hi)) throw InputError("invalid interval");
  if (iv.spread() <= phi) return iv;

  const auto steps = static_cast<std::size_t>(std::floor(std::log(iv.spread()) / std::log(phi)));
  auto ladder = [&](std::size_t i) { return i > steps ? iv.hi : iv.lo * std::pow(phi, static_cast<double>(i)); };
  std::size_t lo = 0;
  std::size_t hi = steps + 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double r = ladder(mid);
    const DeciderOutcome out = problem.decide(r, instance);
    validate_outcome(out, r, phi);
    if (out.is_bounded()) return {std::max(out.lo, iv.lo), std::min(out.hi, iv.hi)};
    if (out.is_below()) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {ladder(lo), ladder(hi)};
}

// Accuracy handed to the decider in refine_eps never exceeds this.
inline constexpr double kMaxDeciderEps = 1.0;

// Narrows an interval containing f to spread at most 1 + eps. Every round
// queries the geometric midpoint with a decider whose accuracy matches the
// current spread, so the spread's logarithm at least halves per round.
template <EpsDecidable P>
Interval refine_eps(const P& problem, const NdpInstance<typename P::Context>& instance, Interval iv,
                    double eps, std::size_t* rounds = nullptr) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (!(iv.lo > 0.0) || !(iv.lo <= iv.hi)) throw InputError("invalid interval");
  std::size_t count = 0;
  double current = iv.spread() - 1.0;
  // Relative slack so that an interval of spread exactly 1 + eps, as
  // computed in floating point, needs no further round.
  constexpr double kRoundoff = 1e-12;
  while (current > eps * (1.0 + kRoundoff)) {
    const double next = std::sqrt(1.0 + current) - 1.0;
    const double mid = iv.lo * (1.0 + next);
    const double decider_eps = std::min(next, kMaxDeciderEps);
    const DeciderOutcome out = problem.decide(mid, instance, decider_eps);
    validate_outcome(out, mid, 1.0 + next);
    if (out.is_bounded()) {
      iv = {std::max(out.lo, iv.lo), std::min(out.hi, iv.hi)};
    } else if (out.is_below()) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
    current = std::min(next, iv.spread() - 1.0);
    ++count;
  }
  if (rounds) *rounds = count;
  return iv;
}

// Rank-k values (1-based) of a multiset and of a perturbation of it differ
// by at most delta whenever every element moved by less than delta.
inline bool rank_stable_under_perturbation(std::vector<double> values, std::vector<double> perturbed,
                                           double delta, std::size_t k) {
  if (values.size() != perturbed.size() || k < 1 || k > values.size()) {
    throw InputError("rank out of range");
  }
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
  std::nth_element(perturbed.begin(), perturbed.begin() + (k - 1), perturbed.end());
  return std::abs(values[k - 1] - perturbed[k - 1]) <= delta;
}

}  // namespace netprune
