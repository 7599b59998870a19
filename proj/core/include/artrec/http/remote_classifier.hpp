#pragma once

#include <string>

#include "artrec/sentiment.hpp"

namespace artrec {

/// Sentiment port backed by an out-of-process model server.
///
/// POSTs {"text": ...} to `url` and expects {"label": "positive"|"negative",
/// "confidence": number}. Any transport failure, non-200 status or malformed
/// reply raises ClassifierUnavailable.
class RemoteClassifier final : public SentimentClassifier {
 public:
  /// `url` like http://127.0.0.1:9000/classify
  explicit RemoteClassifier(std::string url, int timeout_seconds = 10);

  std::string id() const override;
  SentimentLabel classify(std::string_view text) const override;

 private:
  std::string base_;
  std::string path_;
  int timeout_seconds_;
};

}  // namespace artrec
