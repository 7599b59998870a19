#pragma once

#include <memory>
#include <string>

#include "artrec/error.hpp"

namespace artrec {

class Service;

/// HTTP status for a module error. Bodies carry the error name as `code`.
int http_status(ErrorCode code) noexcept;

/// HTTP+JSON front end for a Service. Routes:
///
///   GET  /healthz
///   GET  /paintings, /paintings/{id}, /spaces
///   POST /recommend
///   POST /curation, /curation/{id}/attach|action|finalize|timing
///   GET  /curation/{id}, /curation/{id}/timing
///   POST /sessions, /sessions/{id}/pre|post|reflection|ratings
///   GET  /sessions/{id}
///   GET  /analytics/mood|panas|ratings, /export/sessions.csv
///   POST /sentiment, /themes      GET /themes/{reflection_ref}
///
/// Errors: {"error": {"code": "<ErrorCode>", "message": "..."}}.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Blocks until stop(). Returns false if the socket could not be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Serves on a socket bound by bind_any_port(); blocks until stop().
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace artrec
