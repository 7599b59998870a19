#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace artrec {

enum class Polarity { Positive, Negative };

std::string_view to_string(Polarity polarity) noexcept;
Polarity parse_polarity(std::string_view text);

struct SentimentLabel {
  Polarity label = Polarity::Positive;
  double confidence = 0.5;  // in [0, 1]
  std::string classifier_id;

  bool operator==(const SentimentLabel&) const = default;
};

void to_json(nlohmann::json& j, const SentimentLabel& label);

/// Port for reflection sentiment. Implementations may live out of process.
class SentimentClassifier {
 public:
  virtual ~SentimentClassifier() = default;
  virtual std::string id() const = 0;
  /// Throws ClassifierUnavailable when the backend cannot answer.
  virtual SentimentLabel classify(std::string_view text) const = 0;
};

/// Deterministic signed word-lexicon vote.
///
/// Text is lower-cased and split on anything that is not a letter or an
/// apostrophe. Each token found in the lexicon votes its sign. More positive
/// than negative votes gives Positive, fewer gives Negative; a tie (including
/// no votes) gives Positive at confidence 0.5. Otherwise confidence is
/// winning votes / all votes.
class LexiconClassifier final : public SentimentClassifier {
 public:
  explicit LexiconClassifier(std::unordered_map<std::string, int> lexicon, std::string id = "lexicon-baseline");

  /// Small built-in affect lexicon.
  static LexiconClassifier builtin();

  /// One `word polarity` pair per line, polarity +1/-1 (or positive/negative).
  /// `#` starts a comment.
  static LexiconClassifier from_file(const std::filesystem::path& path);

  std::string id() const override { return id_; }
  SentimentLabel classify(std::string_view text) const override;

  std::size_t size() const noexcept { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, int> lexicon_;
  std::string id_;
};

std::vector<std::string> tokenize_words(std::string_view text);

/// Throws EmptyText for blank text.
SentimentLabel classify_sentiment(std::string_view text, const SentimentClassifier& classifier);

}  // namespace artrec
