#pragma once

// Stateless JSON operations shared by the command line and the HTTP service.
// A request is a CAF/WAF document (see framework.hpp) with operation
// parameters as extra top-level keys; the response echoes the parameters it
// used and carries "status": "ok" | "error".

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "argelicit/correction.hpp"
#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/rationality.hpp"
#include "argelicit/refinement.hpp"
#include "argelicit/sampling.hpp"
#include "argelicit/semantics.hpp"

namespace argelicit::api {

inline constexpr double kDefaultEps = 1e-6;
inline constexpr int kDefaultSampleCount = 10;
inline constexpr int kDefaultMaxTries = 1000;
inline constexpr int kCarVerificationSamples = 20000;

// Top-level request keys that are parameters rather than CAF content.
inline constexpr std::array<std::string_view, 13> kParameterKeys = {
    "semantics", "eps", "strategy", "cost_preset", "subset", "max_subset_args", "n",
    "seed", "max_tries", "corner_limit", "verify_car", "degrees", "operation"};

struct Response {
  int http_status = 200;
  Json body;
  bool ok() const { return http_status == 200; }
};

inline int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonConvergence:
      return 500;
    case ErrorCode::kIrrationalInput:
    case ErrorCode::kAlreadyRational:
    case ErrorCode::kInfeasible:
    case ErrorCode::kLimitExceeded:
      return 422;
    default:
      return 400;
  }
}

inline Response error_response(const Error& e, Json echo = Json::object()) {
  Json body = {{"status", "error"}, {"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (!e.argument().empty()) body["argument"] = e.argument();
  if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
    body["residual"] = ce->residual();
    body["iterations"] = ce->iterations();
  }
  for (const auto& [key, value] : echo.items()) body[key] = value;
  return {http_status_for(e.code()), std::move(body)};
}

namespace detail {

class Params {
 public:
  explicit Params(const Json& request) : request_(request) {}

  Semantics semantics() const {
    if (!request_.contains("semantics")) return Semantics::kHbs;
    const Json& v = request_["semantics"];
    if (!v.is_string()) throw Error(ErrorCode::kInvalidParameter, "semantics must be a string");
    auto s = semantics_from_string(v.get<std::string>());
    if (!s) throw Error(ErrorCode::kInvalidParameter, "unknown semantics '" + v.get<std::string>() + "'");
    return *s;
  }

  double number(const char* key, double fallback) const {
    if (!request_.contains(key)) return fallback;
    if (!request_[key].is_number()) throw Error(ErrorCode::kInvalidParameter, std::string(key) + " must be a number");
    return request_[key].get<double>();
  }

  std::optional<double> optional_number(const char* key) const {
    if (!request_.contains(key) || request_[key].is_null()) return std::nullopt;
    return number(key, 0.0);
  }

  std::int64_t integer(const char* key, std::int64_t fallback) const {
    if (!request_.contains(key)) return fallback;
    const Json& v = request_[key];
    if (!v.is_number_integer()) throw Error(ErrorCode::kInvalidParameter, std::string(key) + " must be an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t seed() const {
    if (!request_.contains("seed")) return 0;
    const Json& v = request_["seed"];
    if (!v.is_number_integer()) throw Error(ErrorCode::kInvalidParameter, "seed must be an integer");
    return v.is_number_unsigned() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(v.get<std::int64_t>());
  }

  bool flag(const char* key) const {
    if (!request_.contains(key)) return false;
    if (!request_[key].is_boolean()) throw Error(ErrorCode::kInvalidParameter, std::string(key) + " must be a boolean");
    return request_[key].get<bool>();
  }

  double eps() const {
    const double eps = number("eps", kDefaultEps);
    if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParameter, "eps must be > 0");
    return eps;
  }

 private:
  const Json& request_;
};

inline Json warnings_json(const std::vector<std::string>& warnings) {
  Json out = Json::array();
  for (const auto& w : warnings) out.push_back(w);
  return out;
}

inline Json ids_json(const std::vector<ArgumentId>& ids) {
  Json out = Json::array();
  for (const auto& id : ids) out.push_back(id);
  return out;
}

inline Caf read_caf(const Json& request, std::vector<std::string>& warnings) {
  return caf_from_json(request, &warnings, kParameterKeys);
}

inline Json ok(Json echo) {
  Json body = {{"status", "ok"}};
  for (const auto& [key, value] : echo.items()) body[key] = value;
  return body;
}

inline Json solve_op(const Json& request) {
  Params p(request);
  std::vector<std::string> warnings;
  const Semantics sem = p.semantics();
  const Waf waf = waf_from_json(request, &warnings, kParameterKeys);
  const SolveResult r = solve(waf, sem);
  Json body = ok({{"operation", "solve"}, {"semantics", std::string(to_string(sem))}});
  body["degrees"] = vector_to_json(waf.graph(), r.degrees);
  body["iterations"] = r.iterations;
  body["residual"] = fixed_point_residual(waf, r.degrees, sem);
  body["warnings"] = warnings_json(warnings);
  return body;
}

inline Json invert_op(const Json& request) {
  Params p(request);
  std::vector<std::string> warnings;
  const Semantics sem = p.semantics();
  const Caf caf = read_caf(request, warnings);
  if (!request.contains("degrees")) throw Error(ErrorCode::kMalformedInput, "invert requires a 'degrees' object");
  const auto degrees = vector_from_json<DegreeTag>(caf.graph(), request["degrees"], "degree");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (!(degrees[i] >= 0.0 && degrees[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter, "degree must lie in [0,1]", caf.graph().id(i));
    }
  }
  const WeightVector w = invert_weights(caf.graph(), degrees, sem);
  Json body = ok({{"operation", "invert"}, {"semantics", std::string(to_string(sem))}});
  body["weights"] = vector_to_json(caf.graph(), w);
  body["achievable"] = is_achievable(caf.graph(), degrees, sem);
  body["warnings"] = warnings_json(warnings);
  return body;
}

inline Json rationality_op(const Json& request) {
  Params p(request);
  std::vector<std::string> warnings;
  const Semantics sem = p.semantics();
  const auto corner_limit = static_cast<int>(p.integer("corner_limit", kDefaultCornerLimit));
  const Caf caf = read_caf(request, warnings);
  const RationalityStatus status = rationality_status(caf, sem, corner_limit);

  Json body = ok({{"operation", "rationality"}, {"semantics", std::string(to_string(sem))}});
  body["kind"] = std::string(to_string(status.kind));
  body["rational"] = status.kind != RationalityKind::kIrrational;
  body["fully_rational"] = status.kind == RationalityKind::kFullyRational;
  body["corner_limit"] = corner_limit;
  if (status.corners_total > 0) {
    body["corners_inside"] = status.corners_inside;
    body["corners_total"] = status.corners_total;
  } else {
    body["corners_inside"] = nullptr;
    body["corners_total"] = nullptr;
  }
  body["refinable_axes"] = ids_json(status.refinable_axes);
  if (auto eps = p.optional_number("eps")) {
    if (*eps < 0.0) throw Error(ErrorCode::kInvalidParameter, "eps must be >= 0");
    body["eps"] = *eps;
    body["epsilon_rational"] = is_epsilon_rational(caf, sem, *eps);
  }
  if (p.flag("verify_car")) {
    body["verify_car"] = true;
    if (sem == Semantics::kCar && caf.size() <= 6) {
      const auto audit = verify_corner_reduction(caf, sem, kCarVerificationSamples, p.seed());
      body["car_verification"] = {{"samples", audit.samples},
                                  {"achievable", audit.achievable},
                                  {"consistent", audit.consistent}};
    } else {
      body["car_verification"] = nullptr;
    }
  }
  body["warnings"] = warnings_json(warnings);
  return body;
}

inline Json tightened_json(const std::vector<Tightening>& tightened) {
  Json out = Json::array();
  for (const auto& t : tightened) {
    out.push_back({{"id", t.argument}, {"old_hi", t.old_hi}, {"new_hi", t.new_hi}, {"iterations", t.iterations}});
  }
  return out;
}

inline Json refine_op(const Json& request) {
  Params p(request);
  std::vector<std::string> warnings;
  const Semantics sem = p.semantics();
  const double eps = p.eps();
  const Caf caf = read_caf(request, warnings);
  const RefinementReport report = refine(caf, sem, eps);
  Json body = ok({{"operation", "refine"}, {"semantics", std::string(to_string(sem))}, {"eps", eps}});
  body["caf"] = caf_to_json(report.refined);
  body["tightened"] = tightened_json(report.tightened);
  body["iterations"] = report.iterations;
  body["warnings"] = warnings_json(warnings);
  return body;
}

inline Json correct_op(const Json& request) {
  Params p(request);
  std::vector<std::string> warnings;
  const Semantics sem = p.semantics();
  const double eps = p.eps();
  const auto strategy = p.integer("strategy", 1);
  if (strategy != 1 && strategy != 2) throw Error(ErrorCode::kInvalidParameter, "strategy must be 1 or 2");
  std::string preset_name = "custom";
  if (request.contains("cost_preset")) {
    if (!request["cost_preset"].is_string()) throw Error(ErrorCode::kInvalidParameter, "cost_preset must be a string");
    preset_name = request["cost_preset"].get<std::string>();
  }
  const auto preset = cost_preset_from_string(preset_name);
  if (!preset) throw Error(ErrorCode::kInvalidParameter, "unknown cost preset '" + preset_name + "'");
  const Caf caf = read_caf(request, warnings);
  const CostMap costs = cost_presets(*preset, caf);

  Json body = ok({{"operation", "correct"},
                  {"semantics", std::string(to_string(sem))},
                  {"eps", eps},
                  {"strategy", strategy},
                  {"cost_preset", preset_name}});
  CorrectionResult result;
  if (strategy == 1) {
    std::optional<ArgumentSubset> subset;
    if (request.contains("subset")) {
      std::vector<ArgumentId> ids;
      for (const auto& v : request["subset"]) ids.push_back(v.get<std::string>());
      subset = subset_from_ids(caf.graph(), ids);
      body["subset_requested"] = ids_json(ids);
    }
    result = correct_strategy1(caf, sem, costs, eps, subset);
  } else {
    std::optional<int> cap;
    if (request.contains("max_subset_args") && !request["max_subset_args"].is_null()) {
      cap = static_cast<int>(p.integer("max_subset_args", 0));
      body["max_subset_args"] = *cap;
    }
    result = correct_strategy2(caf, sem, costs, eps, cap);
  }
  body["caf"] = caf_to_json(result.corrected);
  body["total_cost"] = result.total_cost;
  body["parameter_t"] = result.parameter_t;
  body["modified"] = ids_json(result.modified);
  body["subset"] = result.subset ? ids_json(*result.subset) : Json(nullptr);
  body["costs"] = vector_to_json(caf.graph(), costs);
  body["warnings"] = warnings_json(warnings);
  return body;
}

inline Json sample_op(const Json& request) {
  Params p(request);
  std::vector<std::string> warnings;
  const Semantics sem = p.semantics();
  const auto n = p.integer("n", kDefaultSampleCount);
  const auto max_tries = p.integer("max_tries", kDefaultMaxTries);
  const std::uint64_t seed = p.seed();
  if (n < 1 || n > 1000000) throw Error(ErrorCode::kInvalidParameter, "n must lie in [1, 1000000]");
  if (max_tries < 1 || max_tries > 100000000) throw Error(ErrorCode::kInvalidParameter, "max_tries must be >= 1");
  const Caf caf = read_caf(request, warnings);
  const SampleBatch batch = sample_weights(caf, sem, static_cast<int>(n), static_cast<int>(max_tries), seed);

  Json body = ok({{"operation", "sample"},
                  {"semantics", std::string(to_string(sem))},
                  {"n", n},
                  {"max_tries", max_tries},
                  {"seed", seed}});
  Json samples = Json::array();
  for (const auto& e : batch.entries) {
    samples.push_back({{"weights", vector_to_json(caf.graph(), e.weights)},
                       {"degrees", vector_to_json(caf.graph(), e.degrees)},
                       {"method", std::string(to_string(e.method))}});
  }
  body["samples"] = std::move(samples);
  body["attempted"] = batch.attempted;
  body["warnings"] = warnings_json(warnings);
  return body;
}

// Parameters worth echoing even on failure.
inline Json echo_on_error(std::string_view operation, const Json& request) {
  Json echo = {{"operation", std::string(operation)}};
  if (request.is_object()) {
    for (const char* key : {"semantics", "eps", "strategy", "n", "seed"}) {
      if (request.contains(key)) echo[key] = request[key];
    }
  }
  return echo;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 6> kOperations = {"solve",  "invert", "rationality",
                                                                "refine", "correct", "sample"};

/// Runs one operation on a parsed request document.
inline Response handle(std::string_view operation, const Json& request) {
  try {
    if (!request.is_object()) throw Error(ErrorCode::kMalformedInput, "request body must be a JSON object");
    Json body;
    if (operation == "solve") body = detail::solve_op(request);
    else if (operation == "invert") body = detail::invert_op(request);
    else if (operation == "rationality") body = detail::rationality_op(request);
    else if (operation == "refine") body = detail::refine_op(request);
    else if (operation == "correct") body = detail::correct_op(request);
    else if (operation == "sample") body = detail::sample_op(request);
    else throw Error(ErrorCode::kInvalidParameter, "unknown operation '" + std::string(operation) + "'");
    return {200, std::move(body)};
  } catch (const Error& e) {
    return error_response(e, detail::echo_on_error(operation, request));
  } catch (const Json::exception& e) {
    return error_response(Error(ErrorCode::kMalformedInput, e.what()), detail::echo_on_error(operation, request));
  }
}

/// Same, from raw body text.
inline Response handle(std::string_view operation, std::string_view body_text) {
  Json request;
  try {
    request = Json::parse(body_text);
  } catch (const Json::parse_error& e) {
    return error_response(Error(ErrorCode::kMalformedInput, std::string("malformed JSON: ") + e.what()),
                          {{"operation", std::string(operation)}});
  }
  return handle(operation, request);
}

}  // namespace argelicit::api
