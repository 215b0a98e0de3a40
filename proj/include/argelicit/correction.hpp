#pragma once

// Repairing irrational CAFs by lowering interval minima.
//
// Strategy 1 moves the lowest corner S of the box along a cost-weighted line
// towards the origin: with parameter t, argument a (in the movable subset)
// gets  lo'(a) = max(0, lo(a) - t / cost(a)),  so every moving argument is
// charged the same amount t until it reaches 0. The smallest t making the
// CAF rational is found by bisection; rationality is monotone in t because
// lowering coordinates never leaves the achievable region.
//
// Strategy 2 runs Strategy 1 for every non-empty subset of movable arguments
// and keeps the cheapest feasible result.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/rationality.hpp"
#include "argelicit/semantics.hpp"

namespace argelicit {

enum class Strategy { kS1, kS2 };

inline std::string_view to_string(Strategy s) { return s == Strategy::kS1 ? "S1" : "S2"; }

enum class CostPreset { kUnit, kOriginLine, kCustom };

inline std::optional<CostPreset> cost_preset_from_string(std::string_view name) {
  if (name == "unit") return CostPreset::kUnit;
  if (name == "origin" || name == "origin_line") return CostPreset::kOriginLine;
  if (name == "custom") return CostPreset::kCustom;
  return std::nullopt;
}

/// Argument indices, ascending.
using ArgumentSubset = std::vector<std::size_t>;

struct CorrectionResult {
  Caf corrected;
  double total_cost = 0.0;
  std::vector<ArgumentId> modified;
  double parameter_t = 0.0;
  Strategy strategy = Strategy::kS1;
  std::optional<std::vector<ArgumentId>> subset;  // Strategy 2 winner
  int iterations = 0;
};

inline constexpr std::size_t kMaxExhaustiveArguments = 20;

/// UNIT: all ones. ORIGIN_LINE: cost(a) = 1/lo(a), so the corner moves
/// straight towards the origin; arguments with lo(a) = 0 never move and get
/// cost 1. CUSTOM: the CAF's stored costs (1 where absent).
inline CostMap cost_presets(CostPreset kind, const Caf& caf) {
  switch (kind) {
    case CostPreset::kUnit:
      return CostMap(caf.size(), 1.0);
    case CostPreset::kOriginLine: {
      CostMap costs(caf.size(), 1.0);
      bool any = false;
      for (std::size_t a = 0; a < caf.size(); ++a) {
        if (caf.interval(a).lo > 0.0) {
          costs[a] = 1.0 / caf.interval(a).lo;
          any = true;
        }
      }
      if (!any) {
        throw Error(ErrorCode::kInvalidParameter, "origin-line costs need some interval minimum > 0");
      }
      return costs;
    }
    case CostPreset::kCustom:
      return caf.cost_map();
  }
  return CostMap(caf.size(), 1.0);
}

namespace detail {

inline void check_costs(const Caf& caf, const CostMap& costs) {
  if (costs.size() != caf.size()) {
    throw Error(ErrorCode::kInvalidParameter, "cost map size does not match the CAF");
  }
  for (std::size_t a = 0; a < costs.size(); ++a) {
    if (!(costs[a] > 0.0) || !std::isfinite(costs[a])) {
      throw Error(ErrorCode::kInvalidCost, "cost must be strictly positive", caf.graph().id(a));
    }
  }
}

inline std::vector<bool> subset_mask(const Caf& caf, const ArgumentSubset& subset) {
  std::vector<bool> mask(caf.size(), false);
  for (std::size_t a : subset) {
    if (a >= caf.size()) throw Error(ErrorCode::kUnknownArgument, "subset index out of range");
    mask[a] = true;
  }
  return mask;
}

inline double lowered_min(double lo, double cost, double t) { return std::max(0.0, lo - t / cost); }

inline void lower_point(const Caf& caf, const CostMap& costs, const std::vector<bool>& mask, double t,
                        DegreeVector& point) {
  for (std::size_t a = 0; a < caf.size(); ++a) {
    point[a] = mask[a] ? lowered_min(caf.interval(a).lo, costs[a], t) : caf.interval(a).lo;
  }
}

struct LineSearch {
  double t = 0.0;
  int iterations = 0;
};

// Smallest t (to resolution eps) at which the lowered corner is achievable,
// or nullopt when even full saturation is not.
inline std::optional<LineSearch> search_line(const Caf& caf, Semantics sem, const CostMap& costs,
                                             const std::vector<bool>& mask, double eps,
                                             const SolverConfig& cfg) {
  double t_max = 0.0;
  for (std::size_t a = 0; a < caf.size(); ++a) {
    if (mask[a]) t_max = std::max(t_max, costs[a] * caf.interval(a).lo);
  }
  DegreeVector point(caf.size());
  auto rational_at = [&](double t) {
    lower_point(caf, costs, mask, t, point);
    return is_achievable(caf.graph(), point, sem, cfg);
  };
  if (!rational_at(t_max)) return std::nullopt;
  LineSearch out;
  double l = 0.0;  // not rational
  double u = t_max;  // rational
  while (u - l >= eps) {
    const double m = 0.5 * (l + u);
    if (m <= l || m >= u) break;
    if (rational_at(m)) {
      u = m;
    } else {
      l = m;
    }
    ++out.iterations;
  }
  out.t = u;
  return out;
}

inline CorrectionResult assemble(const Caf& caf, const CostMap& costs, const std::vector<bool>& mask,
                                 const LineSearch& search) {
  CorrectionResult result;
  std::vector<Interval> intervals = caf.intervals();
  for (std::size_t a = 0; a < caf.size(); ++a) {
    if (!mask[a]) continue;
    const double lo = intervals[a].lo;
    const double lowered = lowered_min(lo, costs[a], search.t);
    if (lowered < lo) {
      intervals[a].lo = lowered;
      result.total_cost += costs[a] * (lo - lowered);
      result.modified.push_back(caf.graph().id(a));
    }
  }
  result.corrected = caf.with_intervals(std::move(intervals));
  result.parameter_t = search.t;
  result.iterations = search.iterations;
  return result;
}

inline std::vector<bool> full_mask(std::size_t n) { return std::vector<bool>(n, true); }

}  // namespace detail

/// Lowers the minima of the arguments in `subset` by t / cost(a), clamped at 0.
/// Upper bounds and all other arguments are untouched.
inline Caf lowered_caf(const Caf& caf, const CostMap& costs, const ArgumentSubset& subset, double t) {
  detail::check_costs(caf, costs);
  if (t < 0.0) throw Error(ErrorCode::kInvalidParameter, "t must be >= 0");
  const auto mask = detail::subset_mask(caf, subset);
  std::vector<Interval> intervals = caf.intervals();
  for (std::size_t a = 0; a < caf.size(); ++a) {
    if (mask[a]) intervals[a].lo = detail::lowered_min(intervals[a].lo, costs[a], t);
  }
  return caf.with_intervals(std::move(intervals));
}

inline ArgumentSubset all_arguments(const Caf& caf) {
  ArgumentSubset all(caf.size());
  for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
  return all;
}

inline ArgumentSubset subset_from_ids(const AttackGraph& graph, const std::vector<ArgumentId>& ids) {
  ArgumentSubset out;
  for (const auto& id : ids) out.push_back(graph.index_of(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Strategy 1 restricted to `subset` (all arguments when omitted).
inline CorrectionResult correct_strategy1(const Caf& caf, Semantics sem, const CostMap& costs, double eps,
                                          const std::optional<ArgumentSubset>& subset = std::nullopt,
                                          const SolverConfig& cfg = {}) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParameter, "eps must be > 0");
  detail::check_costs(caf, costs);
  if (is_rational(caf, sem, cfg)) {
    throw Error(ErrorCode::kAlreadyRational, "correction requires an irrational CAF");
  }
  const auto mask = subset ? detail::subset_mask(caf, *subset) : detail::full_mask(caf.size());
  const auto search = detail::search_line(caf, sem, costs, mask, eps, cfg);
  if (!search) {
    throw Error(ErrorCode::kInfeasible, "lowering only the given subset cannot make the CAF rational");
  }
  CorrectionResult result = detail::assemble(caf, costs, mask, *search);
  result.strategy = Strategy::kS1;
  return result;
}

/// Strategy 2: exhaustive over non-empty subsets (of size <= max_subset_args
/// when given). Ties in cost go to the smaller subset, then to the
/// lexicographically smaller list of argument positions.
inline CorrectionResult correct_strategy2(const Caf& caf, Semantics sem, const CostMap& costs, double eps,
                                          std::optional<int> max_subset_args = std::nullopt,
                                          const SolverConfig& cfg = {}) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParameter, "eps must be > 0");
  detail::check_costs(caf, costs);
  const std::size_t n = caf.size();
  if (n > kMaxExhaustiveArguments && !max_subset_args) {
    throw Error(ErrorCode::kLimitExceeded,
                "strategy 2 enumerates all subsets; " + std::to_string(n) +
                    " arguments exceeds the limit of 20 without a subset cap");
  }
  if (n >= 63) throw Error(ErrorCode::kLimitExceeded, "too many arguments for subset enumeration");
  if (max_subset_args && *max_subset_args < 1) {
    throw Error(ErrorCode::kInvalidParameter, "subset cap must be >= 1");
  }
  if (is_rational(caf, sem, cfg)) {
    throw Error(ErrorCode::kAlreadyRational, "correction requires an irrational CAF");
  }
  const int cap = max_subset_args.value_or(static_cast<int>(n));
  constexpr double kTie = 1e-12;

  std::optional<CorrectionResult> best;
  ArgumentSubset best_subset;
  std::vector<bool> mask(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t bits = 1; bits < count; ++bits) {
    if (std::popcount(bits) > cap) continue;
    ArgumentSubset subset;
    for (std::size_t a = 0; a < n; ++a) {
      mask[a] = (bits >> a) & 1U;
      if (mask[a]) subset.push_back(a);
    }
    const auto search = detail::search_line(caf, sem, costs, mask, eps, cfg);
    if (!search) continue;
    CorrectionResult candidate = detail::assemble(caf, costs, mask, *search);
    bool better = !best;
    if (best) {
      if (candidate.total_cost < best->total_cost - kTie) {
        better = true;
      } else if (std::abs(candidate.total_cost - best->total_cost) <= kTie) {
        better = subset.size() < best_subset.size() ||
                 (subset.size() == best_subset.size() && subset < best_subset);
      }
    }
    if (better) {
      best = std::move(candidate);
      best_subset = std::move(subset);
    }
  }
  if (!best) throw Error(ErrorCode::kInfeasible, "no enumerated subset makes the CAF rational");
  best->strategy = Strategy::kS2;
  std::vector<ArgumentId> ids;
  for (std::size_t a : best_subset) ids.push_back(caf.graph().id(a));
  best->subset = std::move(ids);
  return *std::move(best);
}

}  // namespace argelicit
