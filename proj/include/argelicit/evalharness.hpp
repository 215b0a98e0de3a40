#pragma once

// Random-instance experiment comparing correction strategies 1 and 2.
//
// Instances are directed G(n, p) graphs over ordered pairs (self-attacks only
// on request), intervals [x, 1] with x uniform in lo_range, and integer costs
// uniform in cost_range. Every instance is redrawn until it is irrational for
// the semantics under test.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "argelicit/correction.hpp"
#include "argelicit/error.hpp"
#include "argelicit/framework.hpp"
#include "argelicit/random.hpp"
#include "argelicit/rationality.hpp"
#include "argelicit/semantics.hpp"

namespace argelicit {

struct ExperimentConfig {
  int n_min = 4;
  int n_max = 14;
  int runs_per_n = 40;
  double edge_prob = 0.5;
  Interval lo_range{0.8, 1.0};
  int cost_min = 1;
  int cost_max = 11;
  std::vector<Semantics> semantics{Semantics::kHbs, Semantics::kCar, Semantics::kMax};
  double eps = 1e-6;
  std::uint64_t seed = 0;
  bool allow_self_attacks = false;
  std::optional<int> s2_arg_cap;
  bool shared_instances = false;  // same instance stream for every semantics

  void validate() const {
    if (n_min < 1 || n_min > n_max) throw Error(ErrorCode::kInvalidParameter, "need 1 <= n_min <= n_max");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter, "edge_prob must lie in [0,1]");
    }
    if (runs_per_n < 1) throw Error(ErrorCode::kInvalidParameter, "runs_per_n must be >= 1");
    if (!lo_range.is_valid()) throw Error(ErrorCode::kInvalidParameter, "lo_range must be an interval in [0,1]");
    if (cost_min < 1 || cost_min > cost_max) {
      throw Error(ErrorCode::kInvalidParameter, "cost_range must satisfy 1 <= min <= max");
    }
    if (semantics.empty()) throw Error(ErrorCode::kInvalidParameter, "at least one semantics required");
    if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidParameter, "eps must be > 0");
  }
};

/// Reads a config object using the ExperimentConfig field names; absent
/// fields keep their defaults. `cost_range` and `lo_range` are 2-element arrays.
inline ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedInput, "experiment config must be an object");
  ExperimentConfig cfg;
  try {
    if (j.contains("n_min")) cfg.n_min = j["n_min"].get<int>();
    if (j.contains("n_max")) cfg.n_max = j["n_max"].get<int>();
    if (j.contains("runs_per_n")) cfg.runs_per_n = j["runs_per_n"].get<int>();
    if (j.contains("edge_prob")) cfg.edge_prob = j["edge_prob"].get<double>();
    if (j.contains("lo_range")) cfg.lo_range = {j["lo_range"].at(0).get<double>(), j["lo_range"].at(1).get<double>()};
    if (j.contains("cost_range")) {
      cfg.cost_min = j["cost_range"].at(0).get<int>();
      cfg.cost_max = j["cost_range"].at(1).get<int>();
    }
    if (j.contains("semantics")) {
      cfg.semantics.clear();
      for (const auto& s : j["semantics"]) {
        auto sem = semantics_from_string(s.get<std::string>());
        if (!sem) throw Error(ErrorCode::kInvalidParameter, "unknown semantics '" + s.get<std::string>() + "'");
        cfg.semantics.push_back(*sem);
      }
    }
    if (j.contains("eps")) cfg.eps = j["eps"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("allow_self_attacks")) cfg.allow_self_attacks = j["allow_self_attacks"].get<bool>();
    if (j.contains("s2_arg_cap") && !j["s2_arg_cap"].is_null()) cfg.s2_arg_cap = j["s2_arg_cap"].get<int>();
    if (j.contains("shared_instances")) cfg.shared_instances = j["shared_instances"].get<bool>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("bad experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline Json experiment_config_to_json(const ExperimentConfig& cfg) {
  Json sems = Json::array();
  for (Semantics s : cfg.semantics) sems.push_back(std::string(to_string(s)));
  Json j = {{"n_min", cfg.n_min},
            {"n_max", cfg.n_max},
            {"runs_per_n", cfg.runs_per_n},
            {"edge_prob", cfg.edge_prob},
            {"lo_range", {cfg.lo_range.lo, cfg.lo_range.hi}},
            {"cost_range", {cfg.cost_min, cfg.cost_max}},
            {"semantics", sems},
            {"eps", cfg.eps},
            {"seed", cfg.seed},
            {"allow_self_attacks", cfg.allow_self_attacks},
            {"shared_instances", cfg.shared_instances}};
  j["s2_arg_cap"] = cfg.s2_arg_cap ? Json(*cfg.s2_arg_cap) : Json(nullptr);
  return j;
}

struct ExperimentRow {
  int n = 0;
  std::uint64_t seed = 0;
  Semantics semantics = Semantics::kHbs;
  Strategy strategy = Strategy::kS1;
  double total_cost = 0.0;
  int num_modified = 0;
  double runtime_ms = 0.0;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

/// Arguments are named a1..an.
inline Caf generate_instance(int n, const ExperimentConfig& cfg, std::uint64_t instance_seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "instance size must be >= 1");
  SplitMix64 rng(instance_seed);
  std::vector<ArgumentId> ids;
  for (int i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i + 1));
  std::vector<std::pair<ArgumentId, ArgumentId>> attacks;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t && !cfg.allow_self_attacks) continue;
      if (rng.uniform() < cfg.edge_prob) attacks.emplace_back(ids[s], ids[t]);
    }
  }
  std::vector<Interval> intervals;
  CostMap costs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = cfg.lo_range.lo + rng.uniform() * cfg.lo_range.width();
    intervals.push_back({x, 1.0});
  }
  for (int i = 0; i < n; ++i) costs[i] = static_cast<double>(rng.uniform_int(cfg.cost_min, cfg.cost_max));
  return Caf(AttackGraph(std::move(ids), attacks), std::move(intervals), std::move(costs));
}

struct IrrationalInstance {
  Caf caf;
  std::uint64_t instance_seed = 0;
  int discarded = 0;  // rational draws skipped before this one
};

inline constexpr int kMaxIrrationalDraws = 10000;

/// Draws instances from the stream until one is irrational under `sem`.
inline IrrationalInstance make_irrational_instance(int n, Semantics sem, const ExperimentConfig& cfg,
                                                   std::uint64_t stream_seed) {
  for (int k = 0; k < kMaxIrrationalDraws; ++k) {
    const std::uint64_t seed = derive_seed(stream_seed, {static_cast<std::uint64_t>(k)});
    Caf caf = generate_instance(n, cfg, seed);
    if (!is_rational(caf, sem)) return {std::move(caf), seed, k};
  }
  throw Error(ErrorCode::kInfeasible,
              "no irrational instance in " + std::to_string(kMaxIrrationalDraws) +
                  " draws; the configuration likely cannot produce one");
}

/// Called after each irrational instance is drawn (n, semantics, discards).
using DiscardLogger = std::function<void(int, Semantics, int)>;

inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, const DiscardLogger& log = {}) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  std::vector<ExperimentRow> rows;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    for (int run = 0; run < cfg.runs_per_n; ++run) {
      for (std::size_t s = 0; s < cfg.semantics.size(); ++s) {
        const Semantics sem = cfg.semantics[s];
        const std::uint64_t stream = derive_seed(
            cfg.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(run),
                       cfg.shared_instances ? 0 : static_cast<std::uint64_t>(sem) + 1});
        const IrrationalInstance inst = make_irrational_instance(n, sem, cfg, stream);
        if (log) log(n, sem, inst.discarded);
        const CostMap costs = inst.caf.cost_map();

        auto timed = [&](Strategy strategy) {
          const auto start = Clock::now();
          CorrectionResult r = strategy == Strategy::kS1
                                   ? correct_strategy1(inst.caf, sem, costs, cfg.eps)
                                   : correct_strategy2(inst.caf, sem, costs, cfg.eps, cfg.s2_arg_cap);
          const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
          return ExperimentRow{n, inst.instance_seed, sem, strategy, r.total_cost,
                               static_cast<int>(r.modified.size()), ms};
        };
        rows.push_back(timed(Strategy::kS1));
        rows.push_back(timed(Strategy::kS2));
      }
    }
  }
  return rows;
}

inline constexpr const char* kCsvHeader = "n,seed,semantics,strategy,total_cost,num_modified,runtime_ms";

inline void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ExperimentRow& r : rows) {
    std::ostringstream line;
    line << std::setprecision(17) << r.n << ',' << r.seed << ',' << to_string(r.semantics) << ','
         << to_string(r.strategy) << ',' << r.total_cost << ',' << r.num_modified << ','
         << std::setprecision(6) << r.runtime_ms;
    out << line.str() << '\n';
  }
}

inline void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace argelicit
