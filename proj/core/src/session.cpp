#include "artrec/session.hpp"

#include <algorithm>
#include <cctype>

#include "artrec/catalog.hpp"
#include "artrec/error.hpp"

namespace artrec {

std::string_view to_string(Mood mood) noexcept {
  switch (mood) {
    case Mood::Excited: return "excited";
    case Mood::Cheerful: return "cheerful";
    case Mood::Relaxed: return "relaxed";
    case Mood::Calm: return "calm";
    case Mood::Neutral: return "neutral";
    case Mood::Bored: return "bored";
    case Mood::Sad: return "sad";
    case Mood::Irritated: return "irritated";
    case Mood::Tense: return "tense";
  }
  return "?";
}

std::string_view to_string(Valence valence) noexcept {
  switch (valence) {
    case Valence::Positive: return "positive";
    case Valence::Neutral: return "neutral";
    case Valence::Negative: return "negative";
  }
  return "?";
}

Mood parse_mood(std::string_view text) {
  for (Mood m : kMoods) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorCode::SchemaError, "unknown PAM mood '" + std::string(text) + "'");
}

std::string_view to_string(PanasItem item) noexcept {
  switch (item) {
    case PanasItem::Attentive: return "attentive";
    case PanasItem::Determined: return "determined";
    case PanasItem::Enthusiastic: return "enthusiastic";
    case PanasItem::Interested: return "interested";
    case PanasItem::Strong: return "strong";
    case PanasItem::Afraid: return "afraid";
    case PanasItem::Distressed: return "distressed";
    case PanasItem::Nervous: return "nervous";
    case PanasItem::Scared: return "scared";
    case PanasItem::Upset: return "upset";
  }
  return "?";
}

std::string_view to_string(QualityDimension dim) noexcept {
  switch (dim) {
    case QualityDimension::Accuracy: return "accuracy";
    case QualityDimension::Diversity: return "diversity";
    case QualityDimension::Novelty: return "novelty";
    case QualityDimension::Serendipity: return "serendipity";
    case QualityDimension::Immersion: return "immersion";
    case QualityDimension::Engagement: return "engagement";
  }
  return "?";
}

namespace {

void check_scale(std::string_view item, int value) {
  if (value < kScaleMin || value > kScaleMax) {
    throw Error(ErrorCode::RangeError, std::string(item) + "=" + std::to_string(value));
  }
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

PanasResponse PanasResponse::from_items(const std::map<std::string, int>& items, std::optional<int> neutral) {
  PanasResponse r;
  for (const auto& [name, _] : items) {
    if (std::none_of(kPanasItems.begin(), kPanasItems.end(), [&](PanasItem i) { return to_string(i) == name; })) {
      throw Error(ErrorCode::SchemaError, "unknown PANAS item '" + name + "'");
    }
  }
  for (PanasItem item : kPanasItems) {
    auto it = items.find(std::string(to_string(item)));
    if (it == items.end()) throw Error(ErrorCode::SchemaError, "missing PANAS item '" + std::string(to_string(item)) + "'");
    check_scale(to_string(item), it->second);
    r.scores[static_cast<std::size_t>(item)] = it->second;
  }
  if (neutral) check_scale("neutral", *neutral);
  r.neutral = neutral;
  return r;
}

void QualityRatings::validate() const {
  for (QualityDimension d : kQualityDimensions) check_scale(to_string(d), (*this)[d]);
}

QualityRatings QualityRatings::uniform(int value) {
  QualityRatings r;
  r.values.fill(value);
  return r;
}

nlohmann::json to_json(const InstrumentBundle& bundle) {
  nlohmann::json j{{"captured_at", bundle.captured_at.ms}};
  j["pam"] = bundle.pam ? nlohmann::json{{"mood", to_string(bundle.pam->mood)},
                                         {"valence", to_string(bundle.pam->valence())}}
                        : nlohmann::json(nullptr);
  if (bundle.panas) {
    nlohmann::json items = nlohmann::json::object();
    for (PanasItem i : kPanasItems) items[std::string(to_string(i))] = (*bundle.panas)[i];
    j["panas"] = {{"items", std::move(items)},
                  {"neutral", bundle.panas->neutral ? nlohmann::json(*bundle.panas->neutral) : nlohmann::json(nullptr)}};
  } else {
    j["panas"] = nullptr;
  }
  return j;
}

InstrumentBundle bundle_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "instrument bundle must be an object");
  InstrumentBundle b;
  try {
    if (auto it = j.find("pam"); it != j.end() && !it->is_null()) {
      b.pam = PamResponse{parse_mood(it->is_string() ? it->get<std::string>() : it->at("mood").get<std::string>())};
    }
    if (auto it = j.find("panas"); it != j.end() && !it->is_null()) {
      const nlohmann::json& items = it->contains("items") ? it->at("items") : *it;
      std::map<std::string, int> values;
      for (const auto& [name, v] : items.items()) {
        if (name == "neutral") continue;
        values[name] = v.get<int>();
      }
      std::optional<int> neutral;
      if (auto n = it->find("neutral"); n != it->end() && !n->is_null()) neutral = n->get<int>();
      b.panas = PanasResponse::from_items(values, neutral);
    }
    b.captured_at = {j.value("captured_at", std::int64_t{0})};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("instrument bundle: ") + e.what());
  }
  return b;
}

nlohmann::json to_json(const QualityRatings& ratings) {
  nlohmann::json j = nlohmann::json::object();
  for (QualityDimension d : kQualityDimensions) j[std::string(to_string(d))] = ratings[d];
  return j;
}

QualityRatings ratings_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "ratings must be an object");
  QualityRatings r;
  for (QualityDimension d : kQualityDimensions) {
    auto it = j.find(std::string(to_string(d)));
    if (it == j.end() || !it->is_number_integer()) {
      throw Error(ErrorCode::SchemaError, "missing integer rating '" + std::string(to_string(d)) + "'");
    }
    r.values[static_cast<std::size_t>(d)] = it->get<int>();
  }
  return r;
}

std::vector<std::string> default_prompts() {
  return {
      "Imagine yourself entering the painting and exploring it. How did you feel while spending time in this "
      "painting?",
      "Describe your experience in three to four sentences.",
  };
}

GuidedSession GuidedSession::build(CurationSession& curation, std::string_view seed_id, std::string session_id,
                                   Timestamp at, std::vector<std::string> prompts) {
  if (curation.state() != CurationState::Curated && curation.state() != CurationState::Delivered) {
    throw Error(ErrorCode::IllegalTransition, "cannot build a guided session in state " +
                                                  std::string(to_string(curation.state())));
  }
  if (!curation.has_seed(seed_id)) throw Error(ErrorCode::UnknownSeed, std::string(seed_id));
  if (!is_valid_painting_id(session_id)) {
    throw Error(ErrorCode::InvalidArgument, "session id must match [A-Za-z0-9_-]+");
  }

  GuidedSession session;
  session.append("build",
                 {{"session_id", session_id},
                  {"curation_ref", curation.session_id()},
                  {"seed_id", seed_id},
                  {"arm", to_string(curation.arm())},
                  {"paintings", curation.curated().at(std::string(seed_id))},
                  {"prompts", std::move(prompts)}},
                 at);
  curation.mark_delivered(seed_id, session.session_id(), at);
  return session;
}

GuidedSession GuidedSession::replay(std::span<const Event> events) {
  if (events.empty()) throw Error(ErrorCode::SchemaError, "empty guided session event log");
  GuidedSession session;
  for (const Event& e : events) session.apply(e);
  return session;
}

void GuidedSession::record_pre(const InstrumentBundle& bundle, Timestamp at) {
  append("pre", artrec::to_json(bundle), at);
}

void GuidedSession::record_post(const InstrumentBundle& bundle, Timestamp at) {
  append("post", artrec::to_json(bundle), at);
}

void GuidedSession::record_reflection(std::string_view painting_id, std::string_view text, Timestamp at) {
  append("reflection", {{"painting_id", painting_id}, {"text", text}}, at);
}

void GuidedSession::record_ratings(const QualityRatings& ratings, Timestamp at) {
  append("ratings", artrec::to_json(ratings), at);
}

bool GuidedSession::is_complete() const {
  if (!pre_ || !post_ || !ratings_) return false;
  return std::all_of(paintings_.begin(), paintings_.end(),
                     [&](const std::string& p) { return reflections_.contains(p); });
}

void GuidedSession::append(std::string kind, nlohmann::json payload, Timestamp at) {
  GuidedSession next = *this;
  next.apply(Event{version() + 1, at, std::move(kind), std::move(payload)});
  *this = std::move(next);
}

void GuidedSession::apply(const Event& event) {
  if (event.seq != events_.size() + 1) {
    throw Error(ErrorCode::SchemaError, "expected seq " + std::to_string(events_.size() + 1) + ", got " +
                                            std::to_string(event.seq));
  }
  if (!events_.empty() && event.at < events_.back().at) {
    throw Error(ErrorCode::NonMonotonicTimestamp, "event time precedes the previous event");
  }
  const bool first = events_.empty();
  if (first != (event.kind == "build")) {
    throw Error(first ? ErrorCode::SchemaError : ErrorCode::IllegalTransition,
                first ? "guided session log must begin with a build event" : "session already built");
  }
  const nlohmann::json& p = event.payload;
  try {
    if (event.kind == "build") {
      session_id_ = p.at("session_id").get<std::string>();
      curation_ref_ = p.at("curation_ref").get<std::string>();
      seed_id_ = p.at("seed_id").get<std::string>();
      arm_ = parse_arm(p.at("arm").get<std::string>());
      paintings_ = p.at("paintings").get<std::vector<std::string>>();
      prompts_ = p.at("prompts").get<std::vector<std::string>>();
      if (paintings_.empty()) throw Error(ErrorCode::InvalidArgument, "a guided session needs paintings");
    } else if (event.kind == "pre" || event.kind == "post") {
      const bool is_pre = event.kind == "pre";
      if (!is_pre && !pre_) throw Error(ErrorCode::OutOfOrder, "post-session instruments before pre-session");
      if ((is_pre ? pre_ : post_).has_value()) throw Error(ErrorCode::DuplicateCapture, event.kind);
      InstrumentBundle bundle = bundle_from_json(p);
      if (!bundle.pam && !bundle.panas) throw Error(ErrorCode::InvalidArgument, "empty instrument bundle");
      bundle.captured_at = event.at;
      (is_pre ? pre_ : post_) = std::move(bundle);
    } else if (event.kind == "reflection") {
      const auto painting = p.at("painting_id").get<std::string>();
      const auto text = p.at("text").get<std::string>();
      if (std::find(paintings_.begin(), paintings_.end(), painting) == paintings_.end()) {
        throw Error(ErrorCode::UnknownPainting, painting);
      }
      if (is_blank(text)) throw Error(ErrorCode::EmptyText, "reflection on " + painting);
      if (reflections_.contains(painting)) throw Error(ErrorCode::DuplicateCapture, "reflection on " + painting);
      reflections_.emplace(painting, text);
    } else if (event.kind == "ratings") {
      QualityRatings ratings = ratings_from_json(p);
      ratings.validate();
      if (ratings_) throw Error(ErrorCode::DuplicateCapture, "ratings");
      ratings_ = ratings;
    } else {
      throw Error(ErrorCode::SchemaError, "unknown guided session event kind '" + event.kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, "malformed '" + event.kind + "' payload: " + e.what());
  }
  events_.push_back(event);
}

nlohmann::json GuidedSession::to_json() const {
  auto bundle = [](const std::optional<InstrumentBundle>& b) {
    return b ? artrec::to_json(*b) : nlohmann::json(nullptr);
  };
  return nlohmann::json{{"session_id", session_id_},
                        {"curation_ref", curation_ref_},
                        {"seed_id", seed_id_},
                        {"arm", to_string(arm_)},
                        {"paintings", paintings_},
                        {"prompts", prompts_},
                        {"pre", bundle(pre_)},
                        {"post", bundle(post_)},
                        {"ratings", ratings_ ? artrec::to_json(*ratings_) : nlohmann::json(nullptr)},
                        {"reflections", reflections_},
                        {"complete", is_complete()},
                        {"version", version()}};
}

}  // namespace artrec
