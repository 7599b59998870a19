#include "artrec/http/server.hpp"

#include <functional>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "artrec/service.hpp"

namespace artrec {

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::IllegalTransition:
    case ErrorCode::VersionConflict:
    case ErrorCode::DuplicateCapture:
    case ErrorCode::DuplicateId:
    case ErrorCode::OutOfOrder:
      return 409;
    case ErrorCode::ClassifierUnavailable:
      return 503;
    case ErrorCode::IoError:
    case ErrorCode::ConfigError:
      return 500;
    default:
      return 400;
  }
}

namespace {

constexpr const char* kId = "([A-Za-z0-9_-]+)";

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  res.status = http_status(code);
  res.set_content(nlohmann::json{{"error", {{"code", to_string(code)}, {"message", message}}}}.dump(),
                  "application/json");
}

nlohmann::json body_of(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("request body: ") + e.what());
  }
}

using JsonHandler = std::function<nlohmann::json(const httplib::Request&)>;

httplib::Server::Handler wrap(JsonHandler handler, int success = 200) {
  return [handler = std::move(handler), success](const httplib::Request& req, httplib::Response& res) {
    try {
      const nlohmann::json out = handler(req);
      res.status = success;
      res.set_content(out.dump(), "application/json");
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, ErrorCode::SchemaError, e.what());
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(nlohmann::json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(),
                      "application/json");
    }
  };
}

std::string route(const char* prefix, const char* suffix = "") {
  return std::string(prefix) + kId + suffix;
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) { install(); }

  void install() {
    auto& svc = service;
    server.Get("/healthz", wrap([&](const auto&) { return svc.healthz(); }));

    server.Get("/paintings", wrap([&](const auto&) { return svc.list_paintings(); }));
    server.Get(route("/paintings/"), wrap([&](const auto& req) { return svc.get_painting(req.matches[1].str()); }));
    server.Get("/spaces", wrap([&](const auto&) { return svc.list_spaces(); }));
    server.Post("/recommend", wrap([&](const auto& req) { return svc.recommend(body_of(req)); }));

    server.Post("/curation", wrap([&](const auto& req) { return svc.create_curation(body_of(req)); }, 201));
    server.Post(route("/curation/", "/attach"),
                wrap([&](const auto& req) { return svc.attach(req.matches[1].str(), body_of(req)); }));
    server.Post(route("/curation/", "/action"),
                wrap([&](const auto& req) { return svc.record_action(req.matches[1].str(), body_of(req)); }));
    server.Post(route("/curation/", "/finalize"),
                wrap([&](const auto& req) { return svc.finalize(req.matches[1].str(), body_of(req)); }));
    server.Post(route("/curation/", "/timing"),
                wrap([&](const auto& req) { return svc.inject_timing(req.matches[1].str(), body_of(req)); }));
    server.Get(route("/curation/", "/timing"),
               wrap([&](const auto& req) { return svc.timing(req.matches[1].str()); }));
    server.Get(route("/curation/"), wrap([&](const auto& req) { return svc.get_curation(req.matches[1].str()); }));

    server.Post("/sessions", wrap([&](const auto& req) { return svc.build_session(body_of(req)); }, 201));
    server.Post(route("/sessions/", "/pre"),
                wrap([&](const auto& req) { return svc.record_pre(req.matches[1].str(), body_of(req)); }));
    server.Post(route("/sessions/", "/post"),
                wrap([&](const auto& req) { return svc.record_post(req.matches[1].str(), body_of(req)); }));
    server.Post(route("/sessions/", "/reflection"),
                wrap([&](const auto& req) { return svc.record_reflection(req.matches[1].str(), body_of(req)); }));
    server.Post(route("/sessions/", "/ratings"),
                wrap([&](const auto& req) { return svc.record_ratings(req.matches[1].str(), body_of(req)); }));
    server.Get(route("/sessions/"), wrap([&](const auto& req) { return svc.get_session(req.matches[1].str()); }));

    server.Get("/analytics/mood", wrap([&](const auto&) { return svc.mood(); }));
    server.Get("/analytics/panas", wrap([&](const auto&) { return svc.panas(); }));
    server.Get("/analytics/ratings", wrap([&](const auto&) { return svc.ratings(); }));
    server.Get("/export/sessions.csv", [&](const httplib::Request&, httplib::Response& res) {
      try {
        res.set_content(svc.export_csv(), "text/csv");
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      }
    });

    server.Post("/sentiment", wrap([&](const auto& req) { return svc.classify(body_of(req)); }));
    server.Post("/themes", wrap([&](const auto& req) { return svc.record_theme(body_of(req)); }, 201));
    // Reflection refs look like "<session>/<painting>", so match the rest of the path.
    server.Get(R"(/themes/(.+))", wrap([&](const auto& req) { return svc.themes(req.matches[1].str()); }));
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace artrec
