#pragma once

#include "surfkit/orchestrator/run_service.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace surfkit::orchestrator {

/// HTTP status for an error code.
int http_status(Errc code);

/// /v1 JSON API over a RunService:
///
///   GET  /v1/healthz
///   GET  /v1/runs
///   POST /v1/runs                      {"inputs": {...}, "config": {...}}
///   GET  /v1/runs/{id}
///   POST /v1/runs/{id}/wizard          {"text": "..."}
///   POST /v1/runs/{id}/advance         {} | {"until": "input"} | {"result": {...}}
///   GET  /v1/runs/{id}/artifacts/{kind}
///
/// Run bodies are the manifest. Errors are {"error": {"code", "message"}}.
class ApiServer {
 public:
  explicit ApiServer(RunService& service);
  ~ApiServer();

  /// Port 0 picks a free port. Throws BindError.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  RunService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace surfkit::orchestrator
