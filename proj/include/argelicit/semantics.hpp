#pragma once

// Weighted gradual semantics: weighted h-categorizer (HBS), card-based (CAR)
// and max-based (MAX).
//
// Each semantics is a fixed point  deg(a) = w(a) / (1 + agg_a(deg)),  where
// agg_a aggregates the degrees of a's attackers:
//   HBS: sum
//   MAX: max (0 for no attackers)
//   CAR: k + S/k over the k attackers with non-zero weight, S their degree sum
//        (0 when k = 0)
// Since agg_a(deg) >= 0, inverting is a direct product:  w(a) = deg(a) * (1 + agg_a(deg)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"

namespace argelicit {

enum class Semantics { kHbs, kCar, kMax };

inline constexpr Semantics kAllSemantics[] = {Semantics::kHbs, Semantics::kCar, Semantics::kMax};

inline std::string_view to_string(Semantics s) {
  switch (s) {
    case Semantics::kHbs: return "hbs";
    case Semantics::kCar: return "car";
    case Semantics::kMax: return "max";
  }
  return "?";
}

inline std::optional<Semantics> semantics_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "hbs") return Semantics::kHbs;
  if (lower == "car") return Semantics::kCar;
  if (lower == "max") return Semantics::kMax;
  return std::nullopt;
}

struct SolverConfig {
  double tolerance = 1e-12;             // L-infinity stopping criterion
  int max_iterations = 10000;
  double zero_degree_threshold = 1e-12;  // CAR: attackers at or below this degree are null
};

struct SolveResult {
  DegreeVector degrees;
  int iterations = 0;
  double residual = 0.0;  // L-infinity change of the last sweep
};

namespace detail {

// agg_a over the attackers of `target`. `active` decides CAR membership.
template <class IsActive>
double aggregate(Semantics sem, const AttackGraph& graph, std::size_t target,
                 const DegreeVector& deg, IsActive&& active) {
  const auto atts = graph.attackers_of(target);
  switch (sem) {
    case Semantics::kHbs: {
      double s = 0.0;
      for (std::size_t b : atts) s += deg[b];
      return s;
    }
    case Semantics::kMax: {
      double m = 0.0;
      for (std::size_t b : atts) m = std::max(m, deg[b]);
      return m;
    }
    case Semantics::kCar: {
      std::size_t k = 0;
      double s = 0.0;
      for (std::size_t b : atts) {
        if (active(b)) {
          ++k;
          s += deg[b];
        }
      }
      if (k == 0) return 0.0;
      return static_cast<double>(k) + s / static_cast<double>(k);
    }
  }
  return 0.0;
}

}  // namespace detail

/// Forward evaluation by plain fixed-point iteration starting from the weights.
/// Throws ConvergenceError when the L-infinity change does not fall below
/// cfg.tolerance within cfg.max_iterations sweeps.
inline SolveResult solve(const Waf& waf, Semantics sem, const SolverConfig& cfg = {}) {
  const AttackGraph& graph = waf.graph();
  const WeightVector& w = waf.weights();
  const std::size_t n = graph.size();
  // Att*(a) keeps the attackers whose weight is non-zero.
  auto active = [&](std::size_t b) { return w[b] != 0.0; };

  DegreeVector current(w.values());
  DegreeVector next(n);
  double change = 0.0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    change = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      next[a] = w[a] / (1.0 + detail::aggregate(sem, graph, a, current, active));
      change = std::max(change, std::abs(next[a] - current[a]));
    }
    std::swap(current, next);
    if (change < cfg.tolerance) return {std::move(current), it, change};
  }
  throw ConvergenceError("fixed-point iteration did not converge for semantics " +
                             std::string(to_string(sem)),
                         change, cfg.max_iterations);
}

inline DegreeVector solve_degrees(const Waf& waf, Semantics sem, const SolverConfig& cfg = {}) {
  return solve(waf, sem, cfg).degrees;
}

/// L-infinity residual of deg against the defining equation for weights w.
inline double fixed_point_residual(const Waf& waf, const DegreeVector& deg, Semantics sem) {
  const WeightVector& w = waf.weights();
  auto active = [&](std::size_t b) { return w[b] != 0.0; };
  double r = 0.0;
  for (std::size_t a = 0; a < waf.size(); ++a) {
    const double rhs = w[a] / (1.0 + detail::aggregate(sem, waf.graph(), a, deg, active));
    r = std::max(r, std::abs(deg[a] - rhs));
  }
  return r;
}

/// The unique weighting producing `degrees`. Entries may exceed 1, in which
/// case the degree vector is not achievable.
inline WeightVector invert_weights(const AttackGraph& graph, const DegreeVector& degrees,
                                   Semantics sem, const SolverConfig& cfg = {}) {
  if (degrees.size() != graph.size()) {
    throw Error(ErrorCode::kMalformedInput, "degree vector size does not match the graph");
  }
  auto active = [&](std::size_t b) { return degrees[b] > cfg.zero_degree_threshold; };
  WeightVector w(graph.size());
  for (std::size_t a = 0; a < graph.size(); ++a) {
    w[a] = degrees[a] * (1.0 + detail::aggregate(sem, graph, a, degrees, active));
  }
  return w;
}

/// True iff the degree vector is produced by some weighting in [0,1]^n, with
/// kTolerance slack on the upper bound.
inline bool is_achievable(const AttackGraph& graph, const DegreeVector& degrees, Semantics sem,
                          const SolverConfig& cfg = {}) {
  if (degrees.size() != graph.size()) {
    throw Error(ErrorCode::kMalformedInput, "degree vector size does not match the graph");
  }
  // Same computation as invert_weights, stopping at the first weight above 1.
  auto active = [&](std::size_t b) { return degrees[b] > cfg.zero_degree_threshold; };
  for (std::size_t a = 0; a < graph.size(); ++a) {
    const double w = degrees[a] * (1.0 + detail::aggregate(sem, graph, a, degrees, active));
    if (!(w <= 1.0 + kTolerance)) return false;
  }
  return true;
}

}  // namespace argelicit
