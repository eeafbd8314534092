#include "surfkit/orchestrator/http_api.hpp"

#include "surfkit/wizard/session.hpp"

#include <httplib.h>
#include <json.hpp>

namespace surfkit::orchestrator {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

std::string_view content_type(std::string_view kind) {
  if (kind == "cloud") return "application/octet-stream";
  if (kind == "trajectory" || kind == "trajectory_sim") return "text/csv";
  if (kind == "transcript") return "text/plain; charset=utf-8";
  return kJson;
}

void send_error(httplib::Response& res, const Error& e) {
  json body = {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
  if (const auto* se = dynamic_cast<const StageError*>(&e)) body["error"]["stage"] = se->stage();
  res.status = http_status(e.code());
  if (dynamic_cast<const StageError*>(&e)) res.status = 422;
  res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(Errc::ParseError, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed request body: ") + e.what());
  }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_error(res, Error(Errc::IoError, e.what()));
    }
  };
}

void send_manifest(httplib::Response& res, const RunView& v, int status = 200) {
  res.status = status;
  res.set_content(to_json(v.manifest).dump(), kJson);
}

}  // namespace

int http_status(Errc code) {
  switch (code) {
    case Errc::NotFound: return 404;
    case Errc::Conflict:
    case Errc::ProtocolError: return 409;
    case Errc::ParseError:
    case Errc::UnitError:
    case Errc::InvalidParameter:
    case Errc::MissingInput: return 400;
    case Errc::IntegrityError:
    case Errc::IoError:
    case Errc::BindError: return 500;
    default: return 422;
  }
}

ApiServer::ApiServer(RunService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Get("/v1/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
          res.set_content(R"({"status":"ok"})", kJson);
        }));
  s.Get("/v1/runs", guarded([this](const httplib::Request&, httplib::Response& res) {
          res.set_content(json{{"runs", service_.list()}}.dump(), kJson);
        }));
  s.Post("/v1/runs", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const RunInputs inputs = run_inputs_from_json(body.value("inputs", json::object()));
           const RunConfig config = run_config_from_json(body.value("config", json::object()));
           send_manifest(res, service_.create(inputs, config), 201);
         }));
  s.Get(R"(/v1/runs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_manifest(res, service_.get(req.matches[1]));
        }));
  s.Post(R"(/v1/runs/([^/]+)/wizard)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           if (!body.contains("text") || !body["text"].is_string())
             throw Error(Errc::ParseError, "wizard body needs a \"text\" string");
           send_manifest(res, service_.answer(req.matches[1], body["text"].get<std::string>()));
         }));
  s.Post(R"(/v1/runs/([^/]+)/advance)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           const std::string id = req.matches[1];
           if (body.contains("result")) {
             send_manifest(res, service_.advance(id, wizard::action_result_from_json(body["result"])));
           } else if (body.value("until", "") == "input") {
             send_manifest(res, service_.advance_until_input(id));
           } else {
             send_manifest(res, service_.advance(id));
           }
         }));
  s.Get(R"(/v1/runs/([^/]+)/artifacts/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const std::string kind = req.matches[2];
          res.set_content(service_.artifact(req.matches[1], kind), std::string(content_type(kind)));
        }));
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty() && res.status == 404) {
      res.set_content(json{{"error", {{"code", "NotFound"}, {"message", "no such endpoint"}}}}.dump(), kJson);
    }
  });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw Error(Errc::BindError, "cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw Error(Errc::BindError, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::listen() { server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_) server_->stop();
}

}  // namespace surfkit::orchestrator
