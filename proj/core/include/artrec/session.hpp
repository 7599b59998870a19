#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/curation.hpp"
#include "artrec/events.hpp"
#include "artrec/time.hpp"

namespace artrec {

// Pick-A-Mood states, analysed through their valence.
enum class Mood { Excited, Cheerful, Relaxed, Calm, Neutral, Bored, Sad, Irritated, Tense };
enum class Valence { Positive, Neutral, Negative };

inline constexpr std::array<Mood, 9> kMoods = {Mood::Excited, Mood::Cheerful, Mood::Relaxed,
                                               Mood::Calm,    Mood::Neutral,  Mood::Bored,
                                               Mood::Sad,     Mood::Irritated, Mood::Tense};
inline constexpr std::array<Valence, 3> kValences = {Valence::Positive, Valence::Neutral, Valence::Negative};

constexpr Valence valence_of(Mood mood) noexcept {
  switch (mood) {
    case Mood::Excited:
    case Mood::Cheerful:
    case Mood::Relaxed:
    case Mood::Calm:
      return Valence::Positive;
    case Mood::Neutral:
      return Valence::Neutral;
    case Mood::Bored:
    case Mood::Sad:
    case Mood::Irritated:
    case Mood::Tense:
      return Valence::Negative;
  }
  return Valence::Neutral;
}

std::string_view to_string(Mood mood) noexcept;
std::string_view to_string(Valence valence) noexcept;
Mood parse_mood(std::string_view text);

struct PamResponse {
  Mood mood = Mood::Neutral;
  Valence valence() const noexcept { return valence_of(mood); }
  bool operator==(const PamResponse&) const = default;
};

// PANAS short form: five positive then five negative items.
enum class PanasItem {
  Attentive, Determined, Enthusiastic, Interested, Strong,
  Afraid, Distressed, Nervous, Scared, Upset,
};
inline constexpr std::size_t kPanasItemCount = 10;
inline constexpr std::array<PanasItem, kPanasItemCount> kPanasItems = {
    PanasItem::Attentive, PanasItem::Determined, PanasItem::Enthusiastic, PanasItem::Interested,
    PanasItem::Strong,    PanasItem::Afraid,     PanasItem::Distressed,   PanasItem::Nervous,
    PanasItem::Scared,    PanasItem::Upset};

constexpr bool is_positive(PanasItem item) noexcept { return static_cast<int>(item) < 5; }
std::string_view to_string(PanasItem item) noexcept;

inline constexpr int kScaleMin = 1;
inline constexpr int kScaleMax = 5;

struct PanasResponse {
  std::array<int, kPanasItemCount> scores{};  // indexed by PanasItem
  std::optional<int> neutral;                 // pass-through, never aggregated

  int operator[](PanasItem item) const noexcept { return scores[static_cast<std::size_t>(item)]; }

  /// Requires exactly the ten item names with values 1..5. Throws SchemaError
  /// for missing/unknown items and RangeError for out-of-range values.
  static PanasResponse from_items(const std::map<std::string, int>& items, std::optional<int> neutral = {});

  bool operator==(const PanasResponse&) const = default;
};

enum class QualityDimension { Accuracy, Diversity, Novelty, Serendipity, Immersion, Engagement };
inline constexpr std::array<QualityDimension, 6> kQualityDimensions = {
    QualityDimension::Accuracy,    QualityDimension::Diversity, QualityDimension::Novelty,
    QualityDimension::Serendipity, QualityDimension::Immersion, QualityDimension::Engagement};
std::string_view to_string(QualityDimension dim) noexcept;

struct QualityRatings {
  std::array<int, 6> values{};  // indexed by QualityDimension

  int operator[](QualityDimension d) const noexcept { return values[static_cast<std::size_t>(d)]; }

  /// Throws RangeError(item, value) for anything outside 1..5.
  void validate() const;

  static QualityRatings uniform(int value);

  bool operator==(const QualityRatings&) const = default;
};

struct InstrumentBundle {
  std::optional<PamResponse> pam;
  std::optional<PanasResponse> panas;
  Timestamp captured_at;

  bool operator==(const InstrumentBundle&) const = default;
};

nlohmann::json to_json(const InstrumentBundle& bundle);
InstrumentBundle bundle_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QualityRatings& ratings);
QualityRatings ratings_from_json(const nlohmann::json& j);

/// Narrative prompts used when none are configured.
std::vector<std::string> default_prompts();

/// A patient-facing session built from one seed's curated paintings.
/// Event-sourced the same way as CurationSession, with the same reference
/// invalidation rule.
class GuidedSession {
 public:
  /// Requires the curation to be curated (or already delivering) and the seed
  /// to belong to it. Marks the curation delivered.
  /// Throws IllegalTransition, UnknownSeed.
  static GuidedSession build(CurationSession& curation, std::string_view seed_id, std::string session_id,
                             Timestamp at, std::vector<std::string> prompts = default_prompts());

  static GuidedSession replay(std::span<const Event> events);

  /// Throws DuplicateCapture.
  void record_pre(const InstrumentBundle& bundle, Timestamp at);
  /// Throws OutOfOrder before record_pre, DuplicateCapture on a second call.
  void record_post(const InstrumentBundle& bundle, Timestamp at);
  /// Stored verbatim. Throws UnknownPainting, EmptyText, DuplicateCapture.
  void record_reflection(std::string_view painting_id, std::string_view text, Timestamp at);
  /// Throws RangeError, DuplicateCapture.
  void record_ratings(const QualityRatings& ratings, Timestamp at);

  const std::string& session_id() const noexcept { return session_id_; }
  const std::string& curation_ref() const noexcept { return curation_ref_; }
  const std::string& seed_id() const noexcept { return seed_id_; }
  Arm arm() const noexcept { return arm_; }
  const std::vector<std::string>& paintings() const noexcept { return paintings_; }
  const std::vector<std::string>& prompts() const noexcept { return prompts_; }
  const std::optional<InstrumentBundle>& pre() const noexcept { return pre_; }
  const std::optional<InstrumentBundle>& post() const noexcept { return post_; }
  const std::optional<QualityRatings>& ratings() const noexcept { return ratings_; }
  const std::map<std::string, std::string>& reflections() const noexcept { return reflections_; }

  /// pre, post, ratings and one reflection per painting are all present.
  bool is_complete() const;

  const std::vector<Event>& events() const noexcept { return events_; }
  std::uint64_t version() const noexcept { return events_.size(); }

  nlohmann::json to_json() const;

 private:
  GuidedSession() = default;

  void append(std::string kind, nlohmann::json payload, Timestamp at);
  void apply(const Event& event);

  std::string session_id_;
  std::string curation_ref_;
  std::string seed_id_;
  Arm arm_ = Arm::HitlVisual;
  std::vector<std::string> paintings_;
  std::vector<std::string> prompts_;
  std::optional<InstrumentBundle> pre_;
  std::optional<InstrumentBundle> post_;
  std::optional<QualityRatings> ratings_;
  std::map<std::string, std::string> reflections_;
  std::vector<Event> events_;
};

inline GuidedSession build_session(CurationSession& curation, std::string_view seed_id, std::string session_id,
                                   Timestamp at) {
  return GuidedSession::build(curation, seed_id, std::move(session_id), at);
}

}  // namespace artrec
