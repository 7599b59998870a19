#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/corpus.hpp"
#include "artrec/events.hpp"
#include "artrec/recsys.hpp"
#include "artrec/time.hpp"

namespace artrec {

enum class Arm { ExpertOnly, HitlVisual, HitlMultimodal };
enum class CurationState { Elicited, Recommended, UnderReview, Curated, Delivered };
enum class ActionKind { View, Accept, Reject, Flag, ManualAdd, Regenerate, Finalize };

std::string_view to_string(Arm arm) noexcept;
std::string_view to_string(CurationState state) noexcept;
std::string_view to_string(ActionKind kind) noexcept;

// Parsers throw InvalidArgument on unknown names.
Arm parse_arm(std::string_view text);
CurationState parse_curation_state(std::string_view text);
ActionKind parse_action_kind(std::string_view text);

struct ExpertAction {
  Timestamp at;
  ActionKind kind = ActionKind::View;
  std::string seed_id;
  std::string subject_id;  // empty for regenerate, finalize and a whole-grid view
  std::string reason;      // required for flag and reject
  std::optional<std::int64_t> client_at;  // advisory client clock, never used for timing
};

inline constexpr std::size_t kMaxSeeds = 3;
inline constexpr std::size_t kDefaultPicksPerSeed = 3;

struct TimingReport {
  std::map<std::string, double> per_seed;  // minutes
  double total = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // population (divisor n)
};

/// Total, mean and population SD of per-seed minutes.
TimingReport make_timing_report(std::map<std::string, double> per_seed_minutes);

void to_json(nlohmann::json& j, const TimingReport& report);

struct CurationRequest {
  std::string session_id;
  std::string therapist_id;
  std::string patient_ref;
  Arm arm = Arm::HitlVisual;
  std::vector<std::string> seeds;
  std::size_t target_per_seed = kDefaultPicksPerSeed;
};

using Picks = std::map<std::string, std::vector<std::string>>;

/// Human-in-the-loop curation of one therapist's seeds.
///
/// Every mutation is an Event appended to events(); apply() is the only code
/// path that changes state, so replaying a log reconstructs the session
/// exactly. Legal transitions:
///
///   hitl arms:   elicited -attach-> recommended -action-> under_review
///   expert_only: elicited -action-> under_review
///   under_review -finalize-> curated -deliver-> delivered (-deliver-> delivered)
///
/// Anything else fails with IllegalTransition and leaves the session untouched.
/// Mutations commit by replacing the whole state, so references returned by
/// the accessors are invalidated by any successful mutation.
class CurationSession {
 public:
  /// Throws EmptySeeds, TooManySeeds, UnknownPainting, InvalidArgument.
  static CurationSession start(const Corpus& corpus, const CurationRequest& request, Timestamp at);

  /// Rebuilds a session from its log. Throws whatever the original operation
  /// would have thrown if the log is inconsistent.
  static CurationSession replay(std::span<const Event> events, const Corpus& corpus);

  /// Ranks top-r per seed in `space_id`.
  void attach_recommendations(const Corpus& corpus, std::string_view space_id, std::size_t r, Timestamp at);

  /// Appends an expert action. A regenerate action re-ranks the seed with all
  /// of that seed's rejected ids excluded.
  void record_action(const Corpus& corpus, const ExpertAction& action);

  /// Throws WrongPickCount, NotInList, DuplicatePick, UnknownSeed.
  void finalize_curation(const Picks& picks, Timestamp at);

  /// Records that a guided session was built from `seed_id`.
  void mark_delivered(std::string_view seed_id, std::string_view guided_session_id, Timestamp at);

  /// Headless timing: per-seed minutes supplied directly instead of derived
  /// from view/finalize actions.
  void inject_timing(const std::map<std::string, double>& per_seed_minutes, Timestamp at);

  /// Throws IllegalTransition before curation is finalized.
  TimingReport timing_report() const;

  const std::string& session_id() const noexcept { return session_id_; }
  const std::string& therapist_id() const noexcept { return therapist_id_; }
  const std::string& patient_ref() const noexcept { return patient_ref_; }
  Arm arm() const noexcept { return arm_; }
  CurationState state() const noexcept { return state_; }
  std::size_t target_per_seed() const noexcept { return target_per_seed_; }
  const std::vector<std::string>& seeds() const noexcept { return seeds_; }
  const std::map<std::string, RecommendationList>& lists() const noexcept { return lists_; }
  const std::vector<ExpertAction>& actions() const noexcept { return actions_; }
  const Picks& curated() const noexcept { return curated_; }
  const std::set<std::string>& rejected(std::string_view seed_id) const;
  const std::set<std::string>& manual(std::string_view seed_id) const;
  bool has_seed(std::string_view seed_id) const;

  const std::vector<Event>& events() const noexcept { return events_; }
  /// Number of events applied; used for optimistic concurrency.
  std::uint64_t version() const noexcept { return events_.size(); }

  /// Deterministic export document. Equal logs give byte-identical dumps.
  nlohmann::json to_json() const;

 private:
  struct SeedState {
    std::set<std::string> rejected;
    std::set<std::string> manual;
    std::optional<Timestamp> first_view;
    std::optional<Timestamp> first_action;
    std::optional<Timestamp> done;
  };

  CurationSession() = default;

  void append(const Corpus* corpus, std::string kind, nlohmann::json payload, Timestamp at);
  void apply(const Corpus* corpus, const Event& event);
  void apply_start(const Corpus& corpus, const nlohmann::json& payload);
  void apply_attach(const Corpus& corpus, const nlohmann::json& payload, Timestamp at);
  void apply_action(const Corpus& corpus, const nlohmann::json& payload, Timestamp at);
  void apply_finalize(const nlohmann::json& payload, Timestamp at);
  void apply_deliver(const nlohmann::json& payload);
  void apply_timing(const nlohmann::json& payload);
  void require_state(std::initializer_list<CurationState> allowed, std::string_view operation) const;
  SeedState& seed_state(std::string_view seed_id);
  const EmbeddingSpace& list_space(const Corpus& corpus) const;

  std::string session_id_;
  std::string therapist_id_;
  std::string patient_ref_;
  Arm arm_ = Arm::HitlVisual;
  CurationState state_ = CurationState::Elicited;
  std::size_t target_per_seed_ = kDefaultPicksPerSeed;
  std::vector<std::string> seeds_;
  std::string space_id_;
  std::size_t r_ = 0;
  std::map<std::string, RecommendationList> lists_;
  std::map<std::string, SeedState, std::less<>> per_seed_;
  std::vector<ExpertAction> actions_;
  Picks curated_;
  std::optional<Timestamp> finalized_at_;
  std::map<std::string, double> injected_minutes_;
  std::vector<std::pair<std::string, std::string>> deliveries_;
  std::vector<Event> events_;
};

/// Free-function spellings of the curation operations.
inline CurationSession start_session(const Corpus& corpus, const CurationRequest& request, Timestamp at) {
  return CurationSession::start(corpus, request, at);
}

}  // namespace artrec
