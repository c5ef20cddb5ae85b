#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "netprune/error.hpp"
#include "netprune/framework.hpp"
#include "netprune/geom.hpp"
#include "netprune/nets.hpp"

namespace netprune {

// Ranked problems: the k-th smallest (1-based) of some multiset of
// distances, with m the neighbor order where it applies.
struct RankContext {
  std::uint64_t k = 1;
  std::uint64_t m = 1;
};

struct SolveOptions {
  std::uint64_t seed = 1;
  double eps = 0.1;
  RadiusSampler radius_sampler;
  bool keep_trace = false;
};

struct Solution {
  double value = 0.0;
  Interval interval;
  bool zero = false;
  std::size_t iterations = 0;
  std::size_t nets = 0;
  std::size_t prunes = 0;
  std::vector<TraceStep> trace;
};

// Accuracy actually used by the dual-radius deciders. Capping it below one
// keeps the "below" answer strict.
inline constexpr double kDeciderEpsCap = 0.9;

inline double decider_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive");
  return std::min(eps, kDeciderEpsCap);
}

inline double dual_radius_phi(double eps) {
  const double e = decider_eps(eps);
  return (1.0 + e / 3.0) * (1.0 + e / 4.0);
}

// `holds(rho)` must satisfy: true implies f <= rho + eps*r/4, false implies
// f > rho. Evaluating it at r/(1+eps/3) and at r yields a three-way answer.
template <class Pred>
DeciderOutcome dual_radius_decide(double r, double eps, Pred&& holds) {
  const double e = decider_eps(eps);
  const double r_low = r / (1.0 + e / 3.0);
  if (holds(r_low)) return DeciderOutcome::below(r);
  if (holds(r)) return DeciderOutcome::bounded(r_low, r * (1.0 + e / 4.0));
  return DeciderOutcome::above(r);
}

inline std::uint64_t pairs_of(std::uint64_t w) { return w * (w - 1) / 2; }

template <class Ctx>
void fill_stats(Solution& s, const SolveResult<Ctx>& run, bool keep_trace) {
  s.zero = run.zero;
  s.iterations = run.trace.steps.size();
  for (const auto& step : run.trace.steps) {
    if (step.action == DriverAction::Net) ++s.nets;
    if (step.action == DriverAction::Prune) ++s.prunes;
  }
  if (keep_trace) s.trace = run.trace.steps;
}

inline DriverOptions driver_options(const SolveOptions& options) {
  DriverOptions d;
  d.seed = options.seed;
  d.radius_sampler = options.radius_sampler;
  return d;
}

// Driver followed by eps refinement; the reported value is the upper end.
template <EpsDecidable P>
Solution solve_with_eps_refinement(const P& problem, NdpInstance<typename P::Context> instance,
                                   const SolveOptions& options) {
  Solution s;
  const auto run = ndp_solve(problem, instance, driver_options(options));
  fill_stats(s, run, options.keep_trace);
  if (run.zero) return s;
  s.interval = refine_eps(problem, instance, run.interval, options.eps);
  s.value = s.interval.hi;
  return s;
}

}  // namespace netprune
