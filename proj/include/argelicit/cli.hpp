#pragma once

// Command-line front end. Every subcommand except `eval` and `serve` reads a
// CAF/WAF JSON file, overlays command-line parameters onto it, and runs the
// matching api operation; the JSON response goes to stdout (or -o).
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "argelicit/api.hpp"
#include "argelicit/evalharness.hpp"
#include "argelicit/server.hpp"

namespace argelicit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  file << text << '\n';
}

struct Options {
  std::string input;
  std::string output;
  std::optional<std::string> semantics;
  std::optional<double> eps;
  std::optional<int> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> max_tries;
  std::optional<std::string> cost_preset;
  std::optional<int> subset_cap;
  std::optional<int> corner_limit;
  std::vector<std::string> subset;
  bool verify_car = false;
  int port = 8080;
  std::string host = "127.0.0.1";
};

inline Json summarize(const std::vector<ExperimentRow>& rows) {
  struct Acc {
    int count = 0;
    double cost = 0.0, cost_sq = 0.0, modified = 0.0;
  };
  std::map<std::tuple<int, int, int>, Acc> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.n, static_cast<int>(r.semantics), static_cast<int>(r.strategy)}];
    ++g.count;
    g.cost += r.total_cost;
    g.cost_sq += r.total_cost * r.total_cost;
    g.modified += r.num_modified;
  }
  Json out = Json::array();
  for (const auto& [key, g] : groups) {
    const auto [n, sem, strategy] = key;
    const double mean = g.cost / g.count;
    const double var = std::max(0.0, g.cost_sq / g.count - mean * mean);
    out.push_back({{"n", n},
                   {"semantics", std::string(to_string(static_cast<Semantics>(sem)))},
                   {"strategy", std::string(to_string(static_cast<Strategy>(strategy)))},
                   {"runs", g.count},
                   {"mean_total_cost", mean},
                   {"std_total_cost", std::sqrt(var)},
                   {"mean_num_modified", g.modified / g.count}});
  }
  return out;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Eliciting argument strengths in weighted argumentation frameworks"};
  app.require_subcommand(1);
  detail::Options opt;

  auto add_semantics = [&](CLI::App* sub) {
    sub->add_option("--semantics", opt.semantics, "hbs | car | max (default hbs)")
        ->check(CLI::IsMember({"hbs", "car", "max"}, CLI::ignore_case));
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opt.input, "CAF/WAF JSON document ('-' for stdin)")->required();
    sub->add_option("-o,--output", opt.output, "write the JSON result here instead of stdout");
    add_semantics(sub);
  };

  auto* solve = app.add_subcommand("solve", "acceptability degrees of a weighted framework");
  add_common(solve);
  auto* invert = app.add_subcommand("invert", "weights producing the document's 'degrees'");
  add_common(invert);
  auto* check = app.add_subcommand("check", "rational / fully rational / eps-rational verdicts");
  add_common(check);
  check->add_option("--eps", opt.eps, "also test eps-rationality");
  check->add_option("--corner-limit", opt.corner_limit, "max arguments for corner enumeration (default 16)");
  check->add_option("--seed", opt.seed, "seed for --verify-car");
  check->add_flag("--verify-car", opt.verify_car, "cross-check CAR verdicts by dense sampling (n <= 6)");
  auto* refine_cmd = app.add_subcommand("refine", "tighten upper bounds of a rational CAF");
  add_common(refine_cmd);
  refine_cmd->add_option("--eps", opt.eps, "bisection resolution (default 1e-6)");
  auto* correct = app.add_subcommand("correct", "lower interval minima of an irrational CAF");
  add_common(correct);
  correct->add_option("--eps", opt.eps, "bisection resolution (default 1e-6)");
  correct->add_option("--strategy", opt.strategy, "1 or 2 (default 1)")->check(CLI::IsMember({1, 2}));
  correct->add_option("--cost-preset", opt.cost_preset, "unit | origin | custom (default custom)")
      ->check(CLI::IsMember({"unit", "origin", "origin_line", "custom"}));
  correct->add_option("--subset", opt.subset, "strategy 1: only these arguments may move");
  correct->add_option("--subset-cap", opt.subset_cap, "strategy 2: largest subset size enumerated");
  auto* sample = app.add_subcommand("sample", "sample valid initial weightings");
  add_common(sample);
  sample->add_option("--n", opt.n, "number of weightings (default 10)");
  sample->add_option("--max-tries", opt.max_tries, "rejection draws per entry (default 1000)");
  sample->add_option("--seed", opt.seed, "random seed (default 0)");

  auto* eval = app.add_subcommand("eval", "random-instance experiment, strategies 1 vs 2");
  eval->add_option("config", opt.input, "experiment config JSON (optional)");
  eval->add_option("-o,--output", opt.output, "CSV output path (rows are inlined in the JSON otherwise)");
  eval->add_option("--seed", opt.seed, "master seed (overrides config)");
  add_semantics(eval);

  auto* serve_cmd = app.add_subcommand("serve", "run the JSON service");
  serve_cmd->add_option("--port", opt.port, "TCP port (default 8080)");
  serve_cmd->add_option("--host", opt.host, "bind address (default 127.0.0.1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (serve_cmd->parsed()) {
      err << "serving on http://" << opt.host << ':' << opt.port << '\n';
      return serve(opt.port, opt.host) ? kExitOk : kExitDomain;
    }

    if (eval->parsed()) {
      ExperimentConfig cfg;
      if (!opt.input.empty()) {
        Json doc;
        try {
          doc = Json::parse(detail::read_text(opt.input));
        } catch (const Json::parse_error& e) {
          throw Error(ErrorCode::kMalformedInput, std::string("malformed config: ") + e.what());
        }
        cfg = experiment_config_from_json(doc);
      }
      if (opt.seed) cfg.seed = *opt.seed;
      if (opt.semantics) cfg.semantics = {*semantics_from_string(*opt.semantics)};
      cfg.validate();
      const auto rows = run_experiment(cfg, [&](int n, Semantics s, int discarded) {
        if (discarded > 0) err << "n=" << n << ' ' << to_string(s) << ": discarded " << discarded << " rational draws\n";
      });
      Json body = {{"status", "ok"}, {"operation", "eval"}, {"config", experiment_config_to_json(cfg)},
                   {"rows", rows.size()}, {"summary", detail::summarize(rows)}};
      if (!opt.output.empty()) {
        emit_csv(rows, opt.output);
        body["output"] = opt.output;
      } else {
        std::ostringstream csv;
        write_csv(rows, csv);
        body["csv"] = csv.str();
      }
      out << body.dump(2) << '\n';
      return kExitOk;
    }

    std::string operation;
    if (solve->parsed()) operation = "solve";
    else if (invert->parsed()) operation = "invert";
    else if (check->parsed()) operation = "rationality";
    else if (refine_cmd->parsed()) operation = "refine";
    else if (correct->parsed()) operation = "correct";
    else operation = "sample";

    Json request;
    try {
      request = Json::parse(detail::read_text(opt.input));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kMalformedInput, std::string("malformed JSON: ") + e.what());
    }
    if (!request.is_object()) throw Error(ErrorCode::kMalformedInput, "document must be a JSON object");
    if (opt.semantics) request["semantics"] = *opt.semantics;
    if (opt.eps) request["eps"] = *opt.eps;
    if (opt.strategy) request["strategy"] = *opt.strategy;
    if (opt.seed) request["seed"] = *opt.seed;
    if (opt.n) request["n"] = *opt.n;
    if (opt.max_tries) request["max_tries"] = *opt.max_tries;
    if (opt.cost_preset) request["cost_preset"] = *opt.cost_preset;
    if (opt.subset_cap) request["max_subset_args"] = *opt.subset_cap;
    if (opt.corner_limit) request["corner_limit"] = *opt.corner_limit;
    if (!opt.subset.empty()) request["subset"] = opt.subset;
    if (opt.verify_car) request["verify_car"] = true;

    const api::Response r = api::handle(operation, request);
    if (r.body.contains("warnings")) {
      for (const auto& w : r.body["warnings"]) err << "warning: " << w.get<std::string>() << '\n';
    }
    detail::write_text(r.body.dump(2), opt.output, out);
    if (!r.ok()) err << "error: " << r.body.value("message", "") << '\n';
    return r.ok() ? kExitOk : kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    out << api::error_response(e).body.dump(2) << '\n';
    return kExitDomain;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    out << api::error_response(Error(ErrorCode::kMalformedInput, e.what())).body.dump(2) << '\n';
    return kExitDomain;
  }
}

}  // namespace argelicit::cli
