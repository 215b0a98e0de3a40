#pragma once

// Best refinement of a rational CAF: upper bounds are lowered, axis by axis,
// until every top slab of width eps touches the achievable region. Lower
// bounds never move.

#include <cstddef>
#include <string>
#include <vector>

#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/rationality.hpp"
#include "argelicit/semantics.hpp"

namespace argelicit {

struct Tightening {
  ArgumentId argument;
  double old_hi = 0.0;
  double new_hi = 0.0;
  int iterations = 0;
};

struct RefinementReport {
  Caf refined;
  std::vector<Tightening> tightened;  // declaration order
  double epsilon = 0.0;
  int iterations = 0;  // bisection steps over all arguments
};

/// Arguments are visited in declaration order and the interval list is
/// updated in place. For an argument whose top face is unachievable, bisect
/// on [lo, hi] keeping l achievable and r not (with the other arguments at
/// their lower bounds) until r - l < eps, then set hi to l. The new face is
/// achievable and everything more than eps above it is not.
inline RefinementReport refine(const Caf& caf, Semantics sem, double eps, const SolverConfig& cfg = {}) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParameter, "eps must be > 0");
  if (!is_rational(caf, sem, cfg)) {
    throw Error(ErrorCode::kIrrationalInput, "refinement requires a rational CAF");
  }
  std::vector<Interval> intervals = caf.intervals();
  RefinementReport report;
  report.epsilon = eps;

  DegreeVector point = caf.lower_corner();
  auto achievable_at = [&](std::size_t a, double value) {
    point[a] = value;
    const bool ok = is_achievable(caf.graph(), point, sem, cfg);
    point[a] = intervals[a].lo;
    return ok;
  };

  for (std::size_t a = 0; a < caf.size(); ++a) {
    const double lo = intervals[a].lo;
    const double hi = intervals[a].hi;
    if (achievable_at(a, hi)) continue;

    double l = lo;
    double r = hi;
    int steps = 0;
    while (r - l >= eps) {
      const double m = 0.5 * (l + r);
      if (m <= l || m >= r) break;  // interval exhausted in floating point
      if (achievable_at(a, m)) {
        l = m;
      } else {
        r = m;
      }
      ++steps;
    }
    report.iterations += steps;
    intervals[a].hi = l;
    report.tightened.push_back({caf.graph().id(a), hi, l, steps});
  }
  report.refined = caf.with_intervals(std::move(intervals));
  return report;
}

/// Checks that `candidate` only removes unachievable degrees from `original`:
///  (1) same lower bounds and contained upper bounds;
///  (2) for each tightened axis, the point just above the new upper bound
///      (by `delta`, capped at the old one) with everything else at its lower
///      bound is not achievable.
inline bool is_refinement(const Caf& candidate, const Caf& original, Semantics sem, double delta,
                          const SolverConfig& cfg = {}) {
  if (!(candidate.graph() == original.graph())) {
    throw Error(ErrorCode::kInvalidParameter, "candidate and original must share the same graph");
  }
  if (!(delta > 0.0)) throw Error(ErrorCode::kInvalidParameter, "delta must be > 0");
  for (std::size_t a = 0; a < original.size(); ++a) {
    const Interval& c = candidate.interval(a);
    const Interval& o = original.interval(a);
    if (std::abs(c.lo - o.lo) > kTolerance || c.hi > o.hi + kTolerance) return false;
  }
  DegreeVector point = original.lower_corner();
  for (std::size_t a = 0; a < original.size(); ++a) {
    const double new_hi = candidate.interval(a).hi;
    const double old_hi = original.interval(a).hi;
    if (new_hi >= old_hi - kTolerance) continue;
    point[a] = std::min(new_hi + delta, old_hi);
    const bool removed_achievable = is_achievable(original.graph(), point, sem, cfg);
    point[a] = original.interval(a).lo;
    if (removed_achievable) return false;
  }
  return true;
}

/// r1 is better than r2 iff r1 refines r2. Both must refine `original`.
inline bool is_better_refinement(const Caf& r1, const Caf& r2, const Caf& original, Semantics sem,
                                 double delta, const SolverConfig& cfg = {}) {
  if (!is_refinement(r1, original, sem, delta, cfg) || !is_refinement(r2, original, sem, delta, cfg)) {
    throw Error(ErrorCode::kInvalidParameter, "both candidates must be refinements of the original");
  }
  return is_refinement(r1, r2, sem, delta, cfg);
}

}  // namespace argelicit
