#pragma once

// Rationality of a (CAF, semantics) pair.
//
// All decisions reduce to achievability of single corner points of the
// interval box: the box meets the achievable region iff its lowest corner is
// achievable, and lies inside it iff its highest corner is achievable. Both
// facts rely on the region being closed under lowering any one coordinate.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/random.hpp"
#include "argelicit/semantics.hpp"

namespace argelicit {

enum class RationalityKind { kIrrational, kRational, kFullyRational };

inline std::string_view to_string(RationalityKind k) {
  switch (k) {
    case RationalityKind::kIrrational: return "IRRATIONAL";
    case RationalityKind::kRational: return "RATIONAL";
    case RationalityKind::kFullyRational: return "FULLY_RATIONAL";
  }
  return "?";
}

inline constexpr int kDefaultCornerLimit = 16;

struct RationalityStatus {
  RationalityKind kind = RationalityKind::kIrrational;
  std::uint64_t corners_inside = 0;
  std::uint64_t corners_total = 0;
  std::vector<ArgumentId> refinable_axes;
};

inline bool is_rational(const Caf& caf, Semantics sem, const SolverConfig& cfg = {}) {
  return is_achievable(caf.graph(), caf.lower_corner(), sem, cfg);
}

inline bool is_fully_rational(const Caf& caf, Semantics sem, const SolverConfig& cfg = {}) {
  return is_achievable(caf.graph(), caf.upper_corner(), sem, cfg);
}

/// Every top slab [hi - eps, hi] of the box must still meet the achievable
/// region, and eps may not exceed any interval width.
inline bool is_epsilon_rational(const Caf& caf, Semantics sem, double eps, const SolverConfig& cfg = {}) {
  if (eps < 0.0) throw Error(ErrorCode::kInvalidParameter, "eps must be >= 0");
  for (const Interval& iv : caf.intervals()) {
    if (eps > iv.width() + kTolerance) return false;
  }
  DegreeVector point = caf.lower_corner();
  for (std::size_t a = 0; a < caf.size(); ++a) {
    point[a] = caf.interval(a).hi - eps;
    const bool ok = is_achievable(caf.graph(), point, sem, cfg);
    point[a] = caf.interval(a).lo;
    if (!ok) return false;
  }
  return true;
}

/// Arguments whose whole top face lies outside the achievable region: the
/// lowest corner lifted to max on that axis is not achievable.
inline std::vector<ArgumentId> refinable_axes(const Caf& caf, Semantics sem, const SolverConfig& cfg = {}) {
  std::vector<ArgumentId> out;
  DegreeVector point = caf.lower_corner();
  for (std::size_t a = 0; a < caf.size(); ++a) {
    point[a] = caf.interval(a).hi;
    if (!is_achievable(caf.graph(), point, sem, cfg)) out.push_back(caf.graph().id(a));
    point[a] = caf.interval(a).lo;
  }
  return out;
}

inline RationalityKind rationality_kind(const Caf& caf, Semantics sem, const SolverConfig& cfg = {}) {
  if (!is_rational(caf, sem, cfg)) return RationalityKind::kIrrational;
  if (is_fully_rational(caf, sem, cfg)) return RationalityKind::kFullyRational;
  return RationalityKind::kRational;
}

/// Enumerates all 2^n corners of the interval box. Bit i of the corner index
/// selects hi for argument i.
inline RationalityStatus classify_corners(const Caf& caf, Semantics sem,
                                          int corner_limit = kDefaultCornerLimit,
                                          const SolverConfig& cfg = {}) {
  const std::size_t n = caf.size();
  if (corner_limit < 0 || n > static_cast<std::size_t>(corner_limit) || n >= 63) {
    throw Error(ErrorCode::kLimitExceeded,
                "corner enumeration needs " + std::to_string(n) + " arguments <= corner limit " +
                    std::to_string(corner_limit));
  }
  RationalityStatus status;
  status.corners_total = std::uint64_t{1} << n;
  DegreeVector point(n);
  for (std::uint64_t mask = 0; mask < status.corners_total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = (mask >> i) & 1U ? caf.interval(i).hi : caf.interval(i).lo;
    }
    if (is_achievable(caf.graph(), point, sem, cfg)) ++status.corners_inside;
  }
  if (status.corners_inside == status.corners_total) {
    status.kind = RationalityKind::kFullyRational;
  } else if (status.corners_inside == 0) {
    status.kind = RationalityKind::kIrrational;
  } else {
    status.kind = RationalityKind::kRational;
  }
  status.refinable_axes = refinable_axes(caf, sem, cfg);
  return status;
}

/// Kind from the corner reductions, corner counts only when n <= corner_limit.
inline RationalityStatus rationality_status(const Caf& caf, Semantics sem,
                                            int corner_limit = kDefaultCornerLimit,
                                            const SolverConfig& cfg = {}) {
  if (caf.size() <= static_cast<std::size_t>(std::max(corner_limit, 0))) {
    return classify_corners(caf, sem, corner_limit, cfg);
  }
  RationalityStatus status;
  status.kind = rationality_kind(caf, sem, cfg);
  status.refinable_axes = refinable_axes(caf, sem, cfg);
  return status;
}

struct CornerReductionAudit {
  int samples = 0;
  int achievable = 0;
  bool consistent = true;  // no sampled point contradicts the corner verdicts
};

/// Dense rejection sampling over the interval box, used to cross-check the
/// corner reductions for semantics (CAR) where they are not established.
/// A sampled achievable point contradicts an IRRATIONAL verdict; a sampled
/// unachievable point contradicts FULLY_RATIONAL.
inline CornerReductionAudit verify_corner_reduction(const Caf& caf, Semantics sem, int samples,
                                                    std::uint64_t seed, const SolverConfig& cfg = {}) {
  if (caf.size() > 6) {
    throw Error(ErrorCode::kLimitExceeded, "sampling cross-check is limited to 6 arguments");
  }
  const RationalityKind kind = rationality_kind(caf, sem, cfg);
  SplitMix64 rng(seed);
  CornerReductionAudit audit;
  DegreeVector point(caf.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < caf.size(); ++i) {
      const Interval& iv = caf.interval(i);
      point[i] = iv.lo + rng.uniform() * iv.width();
    }
    ++audit.samples;
    const bool inside = is_achievable(caf.graph(), point, sem, cfg);
    if (inside) ++audit.achievable;
    if (inside && kind == RationalityKind::kIrrational) audit.consistent = false;
    if (!inside && kind == RationalityKind::kFullyRational) audit.consistent = false;
  }
  return audit;
}

}  // namespace argelicit
