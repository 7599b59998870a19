#include "artrec/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "artrec/error.hpp"

namespace artrec {

namespace {

constexpr const char* kPositiveWords[] = {
    "alive",    "awe",       "beautiful", "bright",   "calm",      "cheerful", "comfort",  "comfortable",
    "comforted", "content",  "delight",   "delighted", "enjoy",    "enjoyed",  "free",     "freedom",
    "fresh",    "gentle",    "glad",      "good",     "grateful",  "great",    "happy",    "hope",
    "hopeful",  "inspired",  "joy",       "joyful",   "light",     "love",     "loved",    "lovely",
    "nice",     "peace",     "peaceful",  "pleasant", "quiet",     "refreshed", "refreshing", "relaxed",
    "relaxing", "relieved",  "rested",    "restful",  "safe",      "serene",   "soothing", "tranquil",
    "uplifted", "warm",      "wonderful",
};

constexpr const char* kNegativeWords[] = {
    "afraid",   "alone",     "angry",     "anxious",  "awful",     "bad",      "bored",     "cold",
    "dark",     "depressed", "distressed", "empty",   "fear",      "frightened", "gloomy",  "hopeless",
    "hurt",     "lonely",    "lost",      "nervous",  "overwhelmed", "pain",   "painful",   "sad",
    "scared",   "sick",      "stress",    "stressed", "tense",     "terrible", "threatening", "tired",
    "uncomfortable", "uneasy", "upset",   "worried",
};

}  // namespace

std::string_view to_string(Polarity polarity) noexcept {
  return polarity == Polarity::Positive ? "positive" : "negative";
}

Polarity parse_polarity(std::string_view text) {
  if (text == "positive") return Polarity::Positive;
  if (text == "negative") return Polarity::Negative;
  throw Error(ErrorCode::SchemaError, "unknown sentiment label '" + std::string(text) + "'");
}

void to_json(nlohmann::json& j, const SentimentLabel& label) {
  j = nlohmann::json{{"label", to_string(label.label)},
                     {"confidence", label.confidence},
                     {"classifier_id", label.classifier_id}};
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalpha(c) || c == '\'') {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

LexiconClassifier::LexiconClassifier(std::unordered_map<std::string, int> lexicon, std::string id)
    : lexicon_(std::move(lexicon)), id_(std::move(id)) {
  for (auto& [word, polarity] : lexicon_) polarity = polarity > 0 ? 1 : (polarity < 0 ? -1 : 0);
}

LexiconClassifier LexiconClassifier::builtin() {
  std::unordered_map<std::string, int> lexicon;
  for (const char* w : kPositiveWords) lexicon.emplace(w, 1);
  for (const char* w : kNegativeWords) lexicon.emplace(w, -1);
  return LexiconClassifier(std::move(lexicon));
}

LexiconClassifier LexiconClassifier::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read lexicon '" + path.string() + "'");
  std::unordered_map<std::string, int> lexicon;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string word;
    std::string polarity;
    if (!(fields >> word)) continue;
    if (!(fields >> polarity)) {
      throw Error(ErrorCode::SchemaError, "lexicon line " + std::to_string(number) + ": missing polarity");
    }
    int value = 0;
    if (polarity == "+1" || polarity == "1" || polarity == "positive") {
      value = 1;
    } else if (polarity == "-1" || polarity == "negative") {
      value = -1;
    } else {
      throw Error(ErrorCode::SchemaError, "lexicon line " + std::to_string(number) + ": bad polarity '" +
                                              polarity + "'");
    }
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) { return std::tolower(c); });
    lexicon[word] = value;
  }
  return LexiconClassifier(std::move(lexicon), "lexicon:" + path.filename().string());
}

SentimentLabel LexiconClassifier::classify(std::string_view text) const {
  int positive = 0;
  int negative = 0;
  for (const auto& token : tokenize_words(text)) {
    auto it = lexicon_.find(token);
    if (it == lexicon_.end()) continue;
    if (it->second > 0) ++positive;
    if (it->second < 0) ++negative;
  }
  SentimentLabel label;
  label.classifier_id = id_;
  if (positive == negative) {
    label.label = Polarity::Positive;
    label.confidence = 0.5;
  } else {
    label.label = positive > negative ? Polarity::Positive : Polarity::Negative;
    label.confidence = static_cast<double>(std::max(positive, negative)) / static_cast<double>(positive + negative);
  }
  return label;
}

SentimentLabel classify_sentiment(std::string_view text, const SentimentClassifier& classifier) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw Error(ErrorCode::EmptyText, "sentiment input is empty");
  }
  return classifier.classify(text);
}

}  // namespace artrec
