#include "artrec/http/remote_classifier.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "artrec/error.hpp"

namespace artrec {

RemoteClassifier::RemoteClassifier(std::string url, int timeout_seconds) : timeout_seconds_(timeout_seconds) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw Error(ErrorCode::ConfigError, "sentiment_url must be an http:// URL: " + url);
  }
  const auto path_start = url.find('/', scheme + 3);
  base_ = path_start == std::string::npos ? url : url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::string RemoteClassifier::id() const { return "remote:" + base_ + path_; }

SentimentLabel RemoteClassifier::classify(std::string_view text) const {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  const std::string body = nlohmann::json{{"text", text}}.dump();
  auto res = client.Post(path_, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::ClassifierUnavailable, id() + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::ClassifierUnavailable, id() + ": HTTP " + std::to_string(res->status));
  }
  SentimentLabel label;
  try {
    const auto reply = nlohmann::json::parse(res->body);
    const auto name = reply.at("label").get<std::string>();
    if (name != "positive" && name != "negative") {
      throw Error(ErrorCode::ClassifierUnavailable, id() + ": unknown label '" + name + "'");
    }
    label.label = parse_polarity(name);
    label.confidence = reply.at("confidence").get<double>();
    label.classifier_id = reply.value("classifier_id", id());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ClassifierUnavailable, id() + ": malformed reply: " + e.what());
  }
  if (!(label.confidence >= 0.0 && label.confidence <= 1.0)) {
    throw Error(ErrorCode::ClassifierUnavailable, id() + ": confidence outside [0, 1]");
  }
  return label;
}

}  // namespace artrec
