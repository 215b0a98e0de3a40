#pragma once

// Data model for attack graphs, weighted frameworks (WAF) and constrained
// frameworks (CAF), plus the canonical JSON encoding shared by the CLI and the
// HTTP service.
//
// Argument order is declaration order everywhere: every per-argument vector in
// this library is indexed by the position of the argument in
// AttackGraph::arguments().

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "argelicit/error.hpp"

namespace argelicit {

using Json = nlohmann::ordered_json;
using ArgumentId = std::string;

// Absolute slack used for interval comparisons and achievability.
inline constexpr double kTolerance = 1e-9;

/// Per-argument real values, indexed in declaration order. The tag keeps
/// weights, degrees and costs from being mixed up.
template <class Tag>
class ArgVector {
 public:
  ArgVector() = default;
  explicit ArgVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit ArgVector(std::vector<double> values) : values_(std::move(values)) {}
  ArgVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }
  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  const std::vector<double>& values() const noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }

  friend bool operator==(const ArgVector&, const ArgVector&) = default;

 private:
  std::vector<double> values_;
};

struct WeightTag {};
struct DegreeTag {};
struct CostTag {};

using WeightVector = ArgVector<WeightTag>;
using DegreeVector = ArgVector<DegreeTag>;
using CostMap = ArgVector<CostTag>;

/// L-infinity distance between two vectors of the same kind.
template <class Tag>
double max_abs_diff(const ArgVector<Tag>& x, const ArgVector<Tag>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

struct Attack {
  std::size_t attacker;
  std::size_t target;
  friend bool operator==(const Attack&, const Attack&) = default;
};

/// Arguments plus attack relation. Immutable once built; the constructor
/// rejects empty or duplicate ids, dangling endpoints and repeated attacks.
/// Self-attacks are allowed.
class AttackGraph {
 public:
  AttackGraph() = default;

  AttackGraph(std::vector<ArgumentId> arguments,
              const std::vector<std::pair<ArgumentId, ArgumentId>>& attacks)
      : arguments_(std::move(arguments)), attackers_(arguments_.size()) {
    for (std::size_t i = 0; i < arguments_.size(); ++i) {
      if (arguments_[i].empty()) {
        throw Error(ErrorCode::kMalformedInput, "argument id must be non-empty");
      }
      if (!index_.emplace(arguments_[i], i).second) {
        throw Error(ErrorCode::kDuplicateArgument, "duplicate argument id", arguments_[i]);
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [src, dst] : attacks) {
      const auto s = find(src);
      if (!s) throw Error(ErrorCode::kUnknownArgument, "attack names an undeclared argument", src);
      const auto t = find(dst);
      if (!t) throw Error(ErrorCode::kUnknownArgument, "attack names an undeclared argument", dst);
      if (!seen.emplace(*s, *t).second) {
        throw Error(ErrorCode::kDuplicateAttack, "duplicate attack " + src + " -> " + dst, dst);
      }
      attacks_.push_back({*s, *t});
      attackers_[*t].push_back(*s);
    }
    for (auto& list : attackers_) std::sort(list.begin(), list.end());
  }

  std::size_t size() const noexcept { return arguments_.size(); }
  const std::vector<ArgumentId>& arguments() const noexcept { return arguments_; }
  const std::vector<Attack>& attacks() const noexcept { return attacks_; }
  const ArgumentId& id(std::size_t i) const { return arguments_.at(i); }

  std::optional<std::size_t> find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw Error(ErrorCode::kUnknownArgument, "unknown argument", std::string(id));
  }

  /// Indices of the attackers of argument i, ascending.
  std::span<const std::size_t> attackers_of(std::size_t i) const { return attackers_.at(i); }

  friend bool operator==(const AttackGraph& x, const AttackGraph& y) {
    return x.arguments_ == y.arguments_ && x.attacks_ == y.attacks_;
  }

 private:
  std::vector<ArgumentId> arguments_;
  std::vector<Attack> attacks_;
  std::vector<std::vector<std::size_t>> attackers_;
  std::unordered_map<ArgumentId, std::size_t> index_;
};

/// Att(a): the arguments attacking `a`, in declaration order.
inline std::vector<ArgumentId> attackers(const AttackGraph& graph, std::string_view a) {
  std::vector<ArgumentId> out;
  for (std::size_t b : graph.attackers_of(graph.index_of(a))) out.push_back(graph.id(b));
  return out;
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x, double slack = kTolerance) const noexcept {
    return x >= lo - slack && x <= hi + slack;
  }
  bool is_valid() const noexcept { return 0.0 <= lo && lo <= hi && hi <= 1.0; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Constrained framework: every argument carries an interval of admissible
/// acceptability degrees and, optionally, a positive modification cost.
class Caf {
 public:
  Caf() = default;

  Caf(AttackGraph graph, std::vector<Interval> intervals, std::optional<CostMap> costs = {})
      : graph_(std::move(graph)), intervals_(std::move(intervals)), costs_(std::move(costs)) {
    if (intervals_.size() != graph_.size()) {
      throw Error(ErrorCode::kMalformedInput, "one interval per argument required");
    }
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (!intervals_[i].is_valid()) {
        throw Error(ErrorCode::kInvalidInterval, "interval must satisfy 0 <= lo <= hi <= 1",
                    graph_.id(i));
      }
    }
    if (costs_) {
      if (costs_->size() != graph_.size()) {
        throw Error(ErrorCode::kMalformedInput, "one cost per argument required");
      }
      for (std::size_t i = 0; i < costs_->size(); ++i) {
        if (!((*costs_)[i] > 0.0) || !std::isfinite((*costs_)[i])) {
          throw Error(ErrorCode::kInvalidCost, "cost must be strictly positive", graph_.id(i));
        }
      }
    }
  }

  const AttackGraph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  const Interval& interval(std::size_t i) const { return intervals_.at(i); }
  const Interval& interval(std::string_view id) const { return intervals_.at(graph_.index_of(id)); }
  const std::optional<CostMap>& costs() const noexcept { return costs_; }

  double cost(std::size_t i) const { return costs_ ? (*costs_)[i] : 1.0; }
  CostMap cost_map() const { return costs_ ? *costs_ : CostMap(size(), 1.0); }

  DegreeVector lower_corner() const {
    DegreeVector d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = intervals_[i].lo;
    return d;
  }
  DegreeVector upper_corner() const {
    DegreeVector d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = intervals_[i].hi;
    return d;
  }

  /// Copy with the intervals replaced; graph and costs are kept.
  Caf with_intervals(std::vector<Interval> intervals) const {
    return Caf(graph_, std::move(intervals), costs_);
  }

  friend bool operator==(const Caf&, const Caf&) = default;

 private:
  AttackGraph graph_;
  std::vector<Interval> intervals_;
  std::optional<CostMap> costs_;
};

/// Weighted framework: attack graph plus one initial weight in [0,1] per argument.
class Waf {
 public:
  Waf() = default;
  Waf(AttackGraph graph, WeightVector weights) : graph_(std::move(graph)), weights_(std::move(weights)) {
    if (weights_.size() != graph_.size()) {
      throw Error(ErrorCode::kMalformedInput, "one weight per argument required");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i] >= 0.0 && weights_[i] <= 1.0)) {
        throw Error(ErrorCode::kInvalidWeight, "weight must lie in [0,1]", graph_.id(i));
      }
    }
  }

  const AttackGraph& graph() const noexcept { return graph_; }
  const WeightVector& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return graph_.size(); }

  friend bool operator==(const Waf&, const Waf&) = default;

 private:
  AttackGraph graph_;
  WeightVector weights_;
};

// ---------------------------------------------------------------------------
// JSON encoding
//
//   {"arguments":[{"id":"a","interval":[lo,hi],"cost":c,"weight":w}, ...],
//    "attacks":[["a","b"], ...]}
//
// Missing interval -> [0,1]; missing cost -> 1; missing weight -> 1.
// Unknown keys are ignored and reported through `warnings`.

namespace detail {

inline double read_number(const Json& value, const char* what, const std::string& id) {
  if (!value.is_number()) {
    throw Error(ErrorCode::kMalformedInput, std::string(what) + " must be a number", id);
  }
  return value.get<double>();
}

struct ParsedDocument {
  AttackGraph graph;
  std::vector<Interval> intervals;
  std::optional<CostMap> costs;
  WeightVector weights;
};

inline ParsedDocument parse_document(const Json& doc, std::vector<std::string>* warnings,
                                     std::span<const std::string_view> extra_top_level_keys) {
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedInput, "document must be a JSON object");
  if (!doc.contains("arguments") || !doc["arguments"].is_array()) {
    throw Error(ErrorCode::kMalformedInput, "document requires an 'arguments' array");
  }
  if (warnings) {
    for (const auto& [key, _] : doc.items()) {
      if (key == "arguments" || key == "attacks") continue;
      if (std::find(extra_top_level_keys.begin(), extra_top_level_keys.end(), key) !=
          extra_top_level_keys.end()) {
        continue;
      }
      warnings->push_back("ignoring unknown top-level key '" + key + "'");
    }
  }

  const Json& args = doc["arguments"];
  std::vector<ArgumentId> ids;
  std::vector<Interval> intervals;
  std::vector<double> costs;
  std::vector<double> weights;
  bool any_cost = false;
  for (const Json& entry : args) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw Error(ErrorCode::kMalformedInput, "each argument needs a string 'id'");
    }
    const auto id = entry["id"].get<std::string>();
    Interval iv;
    if (entry.contains("interval")) {
      const Json& v = entry["interval"];
      if (!v.is_array() || v.size() != 2) {
        throw Error(ErrorCode::kMalformedInput, "interval must be a [lo, hi] pair", id);
      }
      iv.lo = read_number(v[0], "interval bound", id);
      iv.hi = read_number(v[1], "interval bound", id);
      if (iv.lo > iv.hi) throw Error(ErrorCode::kInvalidInterval, "interval has lo > hi", id);
      if (!iv.is_valid()) throw Error(ErrorCode::kInvalidInterval, "interval must lie in [0,1]", id);
    }
    double cost = 1.0;
    if (entry.contains("cost")) {
      cost = read_number(entry["cost"], "cost", id);
      if (!(cost > 0.0)) throw Error(ErrorCode::kInvalidCost, "cost must be > 0", id);
      any_cost = true;
    }
    double weight = 1.0;
    if (entry.contains("weight")) {
      weight = read_number(entry["weight"], "weight", id);
      if (!(weight >= 0.0 && weight <= 1.0)) {
        throw Error(ErrorCode::kInvalidWeight, "weight must lie in [0,1]", id);
      }
    }
    if (warnings) {
      for (const auto& [key, _] : entry.items()) {
        if (key != "id" && key != "interval" && key != "cost" && key != "weight") {
          warnings->push_back("ignoring unknown key '" + key + "' on argument '" + id + "'");
        }
      }
    }
    ids.push_back(id);
    intervals.push_back(iv);
    costs.push_back(cost);
    weights.push_back(weight);
  }

  std::vector<std::pair<ArgumentId, ArgumentId>> attacks;
  if (doc.contains("attacks")) {
    if (!doc["attacks"].is_array()) throw Error(ErrorCode::kMalformedInput, "'attacks' must be an array");
    for (const Json& pair : doc["attacks"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        throw Error(ErrorCode::kMalformedInput, "each attack must be a [source, target] pair of ids");
      }
      attacks.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }

  ParsedDocument out{AttackGraph(std::move(ids), attacks), std::move(intervals), std::nullopt,
                     WeightVector(std::move(weights))};
  if (any_cost) out.costs = CostMap(std::move(costs));
  return out;
}

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("malformed JSON: ") + e.what());
  }
}

// Integral values print without a fractional part ("cost":3).
inline Json number(double x) {
  if (std::floor(x) == x && std::abs(x) < 1e15) return static_cast<long long>(x);
  return x;
}

}  // namespace detail

inline Caf caf_from_json(const Json& doc, std::vector<std::string>* warnings = nullptr,
                         std::span<const std::string_view> extra_top_level_keys = {}) {
  auto parsed = detail::parse_document(doc, warnings, extra_top_level_keys);
  return Caf(std::move(parsed.graph), std::move(parsed.intervals), std::move(parsed.costs));
}

inline Caf parse_caf(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  return caf_from_json(detail::parse_json_text(text), warnings);
}

inline Waf waf_from_json(const Json& doc, std::vector<std::string>* warnings = nullptr,
                         std::span<const std::string_view> extra_top_level_keys = {}) {
  auto parsed = detail::parse_document(doc, warnings, extra_top_level_keys);
  return Waf(std::move(parsed.graph), std::move(parsed.weights));
}

inline Waf parse_waf(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  return waf_from_json(detail::parse_json_text(text), warnings);
}

inline Json attacks_to_json(const AttackGraph& graph) {
  Json attacks = Json::array();
  for (const Attack& e : graph.attacks()) attacks.push_back({graph.id(e.attacker), graph.id(e.target)});
  return attacks;
}

inline Json caf_to_json(const Caf& caf) {
  Json args = Json::array();
  for (std::size_t i = 0; i < caf.size(); ++i) {
    Json entry = {{"id", caf.graph().id(i)},
                  {"interval", {caf.interval(i).lo, caf.interval(i).hi}}};
    if (caf.costs()) entry["cost"] = detail::number((*caf.costs())[i]);
    args.push_back(std::move(entry));
  }
  return {{"arguments", std::move(args)}, {"attacks", attacks_to_json(caf.graph())}};
}

inline std::string serialize_caf(const Caf& caf) { return caf_to_json(caf).dump(); }

inline Json waf_to_json(const Waf& waf) {
  Json args = Json::array();
  for (std::size_t i = 0; i < waf.size(); ++i) {
    args.push_back({{"id", waf.graph().id(i)}, {"weight", waf.weights()[i]}});
  }
  return {{"arguments", std::move(args)}, {"attacks", attacks_to_json(waf.graph())}};
}

/// {"a": x_a, ...} in declaration order.
template <class Tag>
Json vector_to_json(const AttackGraph& graph, const ArgVector<Tag>& values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < graph.size(); ++i) out[graph.id(i)] = values[i];
  return out;
}

/// Reads an {"id": value} object that must cover every argument of `graph`.
template <class Tag>
ArgVector<Tag> vector_from_json(const AttackGraph& graph, const Json& obj, const char* what) {
  if (!obj.is_object()) throw Error(ErrorCode::kMalformedInput, std::string(what) + " must be an object");
  ArgVector<Tag> out(graph.size());
  std::vector<bool> seen(graph.size(), false);
  for (const auto& [key, value] : obj.items()) {
    const std::size_t i = graph.index_of(key);
    out[i] = detail::read_number(value, what, key);
    seen[i] = true;
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!seen[i]) throw Error(ErrorCode::kMalformedInput, std::string("missing ") + what, graph.id(i));
  }
  return out;
}

}  // namespace argelicit
