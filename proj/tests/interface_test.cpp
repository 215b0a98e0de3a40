#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "argelicit/cli.hpp"
#include "test_support.hpp"

#ifndef ARGELICIT_DATA_DIR
#define ARGELICIT_DATA_DIR "data"
#endif

namespace argelicit {
namespace {

std::string data(const std::string& name) { return std::string(ARGELICIT_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "argelicit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// CLI

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"solve", data("quad.json"), "--semantics", "xyz"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"solve", data("quad.json"), "--bogus"}).code, cli::kExitUsage);
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("correct"), std::string::npos);
}

TEST(Cli, SolveQuad) {
  const CliRun r = run({"solve", data("quad.json"), "--semantics", "hbs"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["semantics"], "hbs");
  EXPECT_NEAR(j["degrees"]["a"].get<double>(), 0.618, 1e-3);
  EXPECT_NEAR(j["degrees"]["b"].get<double>(), 0.618, 1e-3);
  EXPECT_NEAR(j["degrees"]["c"].get<double>(), 0.447, 1e-3);
  EXPECT_NEAR(j["degrees"]["d"].get<double>(), 0.691, 1e-3);
  // Stable under re-run.
  EXPECT_EQ(run({"solve", data("quad.json"), "--semantics", "hbs"}).out, r.out);
}

TEST(Cli, CheckQuadMatchesCornerClassification) {
  const CliRun r = run({"check", data("quad.json"), "--semantics", "hbs"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Caf caf = parse_caf(slurp(data("quad.json")));
  EXPECT_EQ(r.json()["kind"], std::string(to_string(classify_corners(caf, Semantics::kHbs).kind)));
}

TEST(Cli, CheckExampleChains) {
  EXPECT_EQ(run({"check", data("chain_fully_rational.json")}).json()["kind"], "FULLY_RATIONAL");
  EXPECT_EQ(run({"check", data("chain_rational.json")}).json()["kind"], "RATIONAL");
  EXPECT_EQ(run({"check", data("chain_irrational.json")}).json()["kind"], "IRRATIONAL");
  const Json eps = run({"check", data("chain_rational.json"), "--eps", "0.01"}).json();
  EXPECT_EQ(eps["eps"], 0.01);
  EXPECT_TRUE(eps.contains("epsilon_rational"));
}

TEST(Cli, InvertQuadUnderMax) {
  const CliRun r = run({"invert", data("quad_degrees.json"), "--semantics", "max"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_NEAR(j["weights"]["c"].get<double>(), 0.723, 1e-3);
  EXPECT_TRUE(j["achievable"].get<bool>());
}

TEST(Cli, RefineAndCorrect) {
  const Json refined = run({"refine", data("chain_open.json")}).json();
  EXPECT_NEAR(refined["caf"]["arguments"][1]["interval"][1].get<double>(), 5.0 / 9.0, 1e-6);
  EXPECT_EQ(refined["eps"], 1e-6);

  const CliRun c = run({"correct", data("chain_correction.json"), "--semantics", "hbs", "--strategy", "2", "--eps",
                        "1e-6"});
  ASSERT_EQ(c.code, 0) << c.err;
  const Json j = c.json();
  EXPECT_NEAR(j["total_cost"].get<double>(), 0.0737, 2e-3);
  EXPECT_EQ(j["subset"], Json::array({"b"}));
  EXPECT_EQ(j["strategy"], 2);

  const Json s1 = run({"correct", data("chain_correction.json"), "--strategy", "1"}).json();
  EXPECT_NEAR(s1["total_cost"].get<double>(), 0.1146, 2e-3);
  const Json sub = run({"correct", data("chain_correction.json"), "--subset", "a"}).json();
  EXPECT_NEAR(sub["total_cost"].get<double>(), 0.2333, 2e-3);
}

TEST(Cli, DomainErrorsExitOne) {
  const CliRun refine_irrational = run({"refine", data("chain_irrational.json")});
  EXPECT_EQ(refine_irrational.code, cli::kExitDomain);
  EXPECT_EQ(refine_irrational.json()["code"], "irrational_input");
  const CliRun correct_rational = run({"correct", data("chain_rational.json")});
  EXPECT_EQ(correct_rational.code, cli::kExitDomain);
  EXPECT_EQ(correct_rational.json()["code"], "already_rational");
  const CliRun missing = run({"solve", data("does_not_exist.json")});
  EXPECT_EQ(missing.code, cli::kExitDomain);
  EXPECT_EQ(missing.json()["code"], "io_error");
}

TEST(Cli, SampleIsDeterministic) {
  const CliRun a = run({"sample", data("chain_rational.json"), "--n", "5", "--seed", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.json()["samples"].size(), 5u);
  EXPECT_EQ(run({"sample", data("chain_rational.json"), "--n", "5", "--seed", "3"}).out, a.out);
}

TEST(Cli, EvalWritesCsv) {
  const std::string cfg_path = (std::filesystem::temp_directory_path() / "argelicit_eval.json").string();
  const std::string csv_path = (std::filesystem::temp_directory_path() / "argelicit_eval.csv").string();
  {
    std::ofstream f(cfg_path);
    f << R"({"n_min": 4, "n_max": 4, "runs_per_n": 2, "semantics": ["hbs"]})";
  }
  const CliRun r = run({"eval", cfg_path, "-o", csv_path, "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["rows"], 4);
  const std::string csv = slurp(csv_path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  const CliRun inline_csv = run({"eval", cfg_path, "--seed", "4"});
  EXPECT_TRUE(inline_csv.json().contains("csv"));
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(csv_path);
}

// JSON operations

Json chain_request(double lo_b, double hi_b) {
  return Json::parse(R"({"arguments":[{"id":"a","interval":[0.8,1]},{"id":"b","interval":[)" +
                     std::to_string(lo_b) + "," + std::to_string(hi_b) + R"(]}],"attacks":[["a","b"]]})");
}

TEST(Api, EveryOperationAnswersGoldenInput) {
  const Json quad = Json::parse(slurp(data("quad.json")));
  const Json degrees = Json::parse(slurp(data("quad_degrees.json")));
  const Json correction = Json::parse(slurp(data("chain_correction.json")));
  const std::vector<std::pair<std::string, Json>> cases = {
      {"solve", quad},        {"invert", degrees},          {"rationality", chain_request(0.5, 0.6)},
      {"refine", chain_request(0, 1)}, {"correct", correction}, {"sample", chain_request(0.3, 0.5)}};
  for (const auto& [op, request] : cases) {
    const api::Response r = api::handle(op, request);
    EXPECT_EQ(r.http_status, 200) << op << ": " << r.body.dump();
    EXPECT_EQ(r.body["status"], "ok") << op;
    EXPECT_EQ(r.body["operation"], op);
    EXPECT_EQ(r.body["semantics"], "hbs") << op;
    EXPECT_TRUE(r.body["warnings"].is_array()) << op;
  }
}

TEST(Api, EchoesParameters) {
  Json req = chain_request(0.3, 0.5);
  req["semantics"] = "MAX";
  req["n"] = 3;
  req["seed"] = 11;
  const api::Response r = api::handle("sample", req);
  ASSERT_TRUE(r.ok()) << r.body.dump();
  EXPECT_EQ(r.body["semantics"], "max");
  EXPECT_EQ(r.body["n"], 3);
  EXPECT_EQ(r.body["seed"], 11);
  EXPECT_EQ(r.body["samples"].size(), 3u);
}

TEST(Api, ErrorCodesAndStatuses) {
  const api::Response bad_json = api::handle("solve", std::string_view("{nope"));
  EXPECT_EQ(bad_json.http_status, 400);
  EXPECT_EQ(bad_json.body["code"], "malformed_input");

  Json dangling = chain_request(0, 1);
  dangling["attacks"].push_back({"a", "zz"});
  const api::Response unknown = api::handle("rationality", dangling);
  EXPECT_EQ(unknown.http_status, 400);
  EXPECT_EQ(unknown.body["code"], "unknown_argument");
  EXPECT_EQ(unknown.body["argument"], "zz");

  const api::Response irrational = api::handle("refine", chain_request(0.6, 0.7));
  EXPECT_EQ(irrational.http_status, 422);
  EXPECT_EQ(irrational.body["code"], "irrational_input");
  EXPECT_EQ(irrational.body["operation"], "refine");

  Json bad_eps = chain_request(0, 1);
  bad_eps["eps"] = -1;
  EXPECT_EQ(api::handle("refine", bad_eps).body["code"], "invalid_parameter");
  EXPECT_EQ(api::handle("explode", chain_request(0, 1)).http_status, 400);

  // The bundled semantics always converge here, so check the mapping directly.
  EXPECT_EQ(api::http_status_for(ErrorCode::kNonConvergence), 500);
  const api::Response conv = api::error_response(ConvergenceError("no", 0.5, 10));
  EXPECT_EQ(conv.http_status, 500);
  EXPECT_EQ(conv.body["residual"], 0.5);
  EXPECT_EQ(conv.body["iterations"], 10);
}

TEST(Api, CornerLimitFallsBackToKindOnly) {
  Json req = Json::parse(slurp(data("quad.json")));
  req["corner_limit"] = 2;
  const api::Response r = api::handle("rationality", req);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.body["corners_total"].is_null());
  req["corner_limit"] = 16;
  EXPECT_EQ(api::handle("rationality", req).body["corners_total"], 16);
}

// HTTP service

class Service : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    server_ = make_server().release();
    port_ = server_->bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = new std::thread([] { server_->listen_after_bind(); });
    server_->wait_until_ready();
  }
  static void TearDownTestSuite() {
    server_->stop();
    thread_->join();
    delete thread_;
    delete server_;
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  Json post(const std::string& path, const Json& body, int expected = 200) const {
    auto res = client().Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return Json();
    EXPECT_EQ(res->status, expected) << res->body;
    return Json::parse(res->body);
  }

  static inline httplib::Server* server_ = nullptr;
  static inline std::thread* thread_ = nullptr;
  static inline int port_ = 0;
};

TEST_F(Service, Health) {
  auto res = client().Get("/api/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body), Json({{"status", "ok"}}));
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(Service, RationalityIrrational) {
  EXPECT_EQ(post("/api/rationality", chain_request(0.6, 0.7))["kind"], "IRRATIONAL");
}

TEST_F(Service, RefineOpenChain) {
  const Json j = post("/api/refine", chain_request(0, 1));
  EXPECT_NEAR(j["caf"]["arguments"][1]["interval"][1].get<double>(), 0.5556, 1e-4);
}

TEST_F(Service, EveryEndpointResponds) {
  for (std::string_view op : api::kOperations) {
    auto res = client().Post("/api/" + std::string(op), "{}", "application/json");
    ASSERT_TRUE(res) << op;
    EXPECT_EQ(res->status, 400) << op;
    EXPECT_EQ(Json::parse(res->body)["status"], "error");
  }
  auto missing = client().Post("/api/nothing", "{}", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(Json::parse(missing->body)["code"], "not_found");
  auto bad = client().Post("/api/solve", "not json", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(Json::parse(bad->body)["code"], "malformed_input");
}

TEST_F(Service, ConcurrentIdenticalRequests) {
  const std::string body = Json::parse(slurp(data("quad.json"))).dump();
  std::vector<std::string> bodies(100);
  std::vector<std::thread> threads;
  for (int i = 0; i < 100; ++i) {
    threads.emplace_back([&, i] {
      auto res = client().Post("/api/rationality", body, "application/json");
      if (res && res->status == 200) bodies[i] = res->body;
      else bodies[i] = "error: " + httplib::to_string(res.error());
    });
  }
  for (auto& t : threads) t.join();
  ASSERT_FALSE(bodies[0].empty());
  for (const auto& b : bodies) EXPECT_EQ(b, bodies[0]);
}

// The browser front end's elicitation loop, driven against the service.
TEST_F(Service, ElicitationSessionLoop) {
  Json caf = chain_request(0.6, 0.7);
  EXPECT_EQ(post("/api/rationality", caf)["kind"], "IRRATIONAL");

  Json correct = caf;
  correct["strategy"] = 2;
  const Json corrected = post("/api/correct", correct);
  EXPECT_EQ(corrected["subset"], Json::array({"b"}));
  EXPECT_EQ(corrected["caf"]["arguments"][0]["interval"], caf["arguments"][0]["interval"]);
  caf = corrected["caf"];
  const std::string kind = post("/api/rationality", caf)["kind"];
  EXPECT_NE(kind, "IRRATIONAL");

  // Refinement settles every axis: nothing is left to tighten, and the kind
  // the service reports agrees with direct corner classification.
  caf = post("/api/refine", caf)["caf"];
  const Json status = post("/api/rationality", caf);
  EXPECT_TRUE(status["refinable_axes"].empty());
  EXPECT_EQ(status["kind"], std::string(to_string(classify_corners(caf_from_json(caf), Semantics::kHbs).kind)));

  Json sample = caf;
  sample["n"] = 5;
  const Json samples = post("/api/sample", sample)["samples"];
  ASSERT_EQ(samples.size(), 5u);
  const Caf parsed = caf_from_json(caf);
  for (const auto& s : samples) {
    const DegreeVector d = vector_from_json<DegreeTag>(parsed.graph(), s["degrees"], "degree");
    for (std::size_t a = 0; a < parsed.size(); ++a) EXPECT_TRUE(parsed.interval(a).contains(d[a], 1e-9));
  }
}

}  // namespace
}  // namespace argelicit
