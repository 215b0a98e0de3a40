#pragma once

// HTTP front end for api::handle. Handlers share no mutable state, so the
// server's worker threads can run requests concurrently.
//
//   GET|POST /api/health                 -> {"status":"ok"}
//   POST     /api/{solve,invert,rationality,refine,correct,sample}

#include <memory>
#include <string>

#include "httplib.h"

#include "argelicit/api.hpp"

namespace argelicit {

inline constexpr const char* kJsonContentType = "application/json; charset=utf-8";

inline std::unique_ptr<httplib::Server> make_server() {
  auto server = std::make_unique<httplib::Server>();

  // The browser UI is served from a different origin.
  server->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                               {"Access-Control-Allow-Headers", "Content-Type"},
                               {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  auto health = [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", kJsonContentType);
  };
  server->Get("/api/health", health);
  server->Post("/api/health", health);

  for (std::string_view op : api::kOperations) {
    const std::string operation(op);
    server->Post("/api/" + operation, [operation](const httplib::Request& req, httplib::Response& res) {
      const api::Response r = api::handle(operation, std::string_view(req.body));
      res.status = r.http_status;
      res.set_content(r.body.dump(), kJsonContentType);
    });
  }

  server->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      Json body = {{"status", "error"}, {"code", res.status == 404 ? "not_found" : "http_error"},
                   {"message", "HTTP " + std::to_string(res.status)}};
      res.set_content(body.dump(), kJsonContentType);
    }
  });
  return server;
}

/// Blocks serving on host:port. Returns false if the socket cannot be bound.
inline bool serve(int port, const std::string& host = "127.0.0.1") {
  auto server = make_server();
  return server->listen(host, port);
}

}  // namespace argelicit
