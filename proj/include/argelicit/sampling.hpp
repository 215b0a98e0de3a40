#pragma once

// Sampling initial weightings consistent with a rational CAF.
//
// Each entry first tries rejection sampling: a degree vector drawn uniformly
// from the interval box is kept if achievable. After `max_tries` misses the
// entry falls back to a staircase walk that starts at the (achievable) lowest
// corner and raises one coordinate at a time, never leaving the achievable
// region. The staircase path is not uniform over the feasible region.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/random.hpp"
#include "argelicit/rationality.hpp"
#include "argelicit/semantics.hpp"

namespace argelicit {

enum class SampleMethod { kRejection, kStaircase };

inline std::string_view to_string(SampleMethod m) {
  return m == SampleMethod::kRejection ? "REJECTION" : "STAIRCASE";
}

struct WeightSample {
  WeightVector weights;
  DegreeVector degrees;
  SampleMethod method = SampleMethod::kRejection;
};

struct SampleBatch {
  std::vector<WeightSample> entries;
  std::int64_t attempted = 0;  // rejection draws plus staircase walks
};

namespace detail {

// Largest value in [from, hi] for coordinate `axis` keeping `point`
// achievable, given `point` is achievable with the coordinate at `from`.
inline double max_achievable_along(const AttackGraph& graph, DegreeVector& point, std::size_t axis,
                                   double from, double hi, Semantics sem, const SolverConfig& cfg) {
  point[axis] = hi;
  if (is_achievable(graph, point, sem, cfg)) return hi;
  double l = from;
  double r = hi;
  for (int i = 0; i < 200 && r - l > 1e-13; ++i) {
    const double m = 0.5 * (l + r);
    if (m <= l || m >= r) break;
    point[axis] = m;
    if (is_achievable(graph, point, sem, cfg)) {
      l = m;
    } else {
      r = m;
    }
  }
  point[axis] = from;
  return l;
}

inline WeightVector clamped_weights(const AttackGraph& graph, const DegreeVector& degrees, Semantics sem,
                                    const SolverConfig& cfg) {
  WeightVector w = invert_weights(graph, degrees, sem, cfg);
  for (double& x : w) x = std::clamp(x, 0.0, 1.0);
  return w;
}

}  // namespace detail

inline SampleBatch sample_weights(const Caf& caf, Semantics sem, int n, int max_tries, std::uint64_t seed,
                                  const SolverConfig& cfg = {}) {
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "sample count must be >= 1");
  if (max_tries < 1) throw Error(ErrorCode::kInvalidParameter, "max_tries must be >= 1");
  if (!is_rational(caf, sem, cfg)) {
    throw Error(ErrorCode::kIrrationalInput, "sampling requires a rational CAF");
  }
  const AttackGraph& graph = caf.graph();
  const std::size_t size = caf.size();
  SplitMix64 rng(seed);
  SampleBatch batch;
  DegreeVector point(size);

  for (int e = 0; e < n; ++e) {
    bool accepted = false;
    for (int attempt = 0; attempt < max_tries && !accepted; ++attempt) {
      ++batch.attempted;
      for (std::size_t a = 0; a < size; ++a) {
        const Interval& iv = caf.interval(a);
        point[a] = iv.lo + rng.uniform() * iv.width();
      }
      accepted = is_achievable(graph, point, sem, cfg);
    }
    SampleMethod method = SampleMethod::kRejection;
    if (!accepted) {
      ++batch.attempted;
      method = SampleMethod::kStaircase;
      point = caf.lower_corner();
      std::vector<std::size_t> order(size);
      for (std::size_t a = 0; a < size; ++a) order[a] = a;
      rng.shuffle(order);
      for (std::size_t a : order) {
        const Interval& iv = caf.interval(a);
        const double bound = detail::max_achievable_along(graph, point, a, iv.lo, iv.hi, sem, cfg);
        point[a] = iv.lo + rng.uniform() * (bound - iv.lo);
      }
    }
    batch.entries.push_back({detail::clamped_weights(graph, point, sem, cfg), point, method});
  }
  return batch;
}

}  // namespace argelicit
