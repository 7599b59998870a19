#include "artrec/curation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "artrec/error.hpp"

namespace artrec {

namespace {

const std::set<std::string> kEmptySet;

bool valid_key(std::string_view s) { return is_valid_painting_id(s); }

bool needs_subject(ActionKind kind) {
  return kind != ActionKind::Regenerate && kind != ActionKind::Finalize;
}

bool needs_reason(ActionKind kind) { return kind == ActionKind::Flag || kind == ActionKind::Reject; }

}  // namespace

std::string_view to_string(Arm arm) noexcept {
  switch (arm) {
    case Arm::ExpertOnly: return "expert_only";
    case Arm::HitlVisual: return "hitl_visual";
    case Arm::HitlMultimodal: return "hitl_multimodal";
  }
  return "?";
}

std::string_view to_string(CurationState state) noexcept {
  switch (state) {
    case CurationState::Elicited: return "elicited";
    case CurationState::Recommended: return "recommended";
    case CurationState::UnderReview: return "under_review";
    case CurationState::Curated: return "curated";
    case CurationState::Delivered: return "delivered";
  }
  return "?";
}

std::string_view to_string(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::View: return "view";
    case ActionKind::Accept: return "accept";
    case ActionKind::Reject: return "reject";
    case ActionKind::Flag: return "flag";
    case ActionKind::ManualAdd: return "manual_add";
    case ActionKind::Regenerate: return "regenerate";
    case ActionKind::Finalize: return "finalize";
  }
  return "?";
}

Arm parse_arm(std::string_view text) {
  for (Arm a : {Arm::ExpertOnly, Arm::HitlVisual, Arm::HitlMultimodal}) {
    if (to_string(a) == text) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown arm '" + std::string(text) + "'");
}

CurationState parse_curation_state(std::string_view text) {
  for (CurationState s : {CurationState::Elicited, CurationState::Recommended, CurationState::UnderReview,
                          CurationState::Curated, CurationState::Delivered}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown curation state '" + std::string(text) + "'");
}

ActionKind parse_action_kind(std::string_view text) {
  for (ActionKind k : {ActionKind::View, ActionKind::Accept, ActionKind::Reject, ActionKind::Flag,
                       ActionKind::ManualAdd, ActionKind::Regenerate, ActionKind::Finalize}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown action kind '" + std::string(text) + "'");
}

TimingReport make_timing_report(std::map<std::string, double> per_seed_minutes) {
  TimingReport report;
  report.per_seed = std::move(per_seed_minutes);
  if (report.per_seed.empty()) return report;
  for (const auto& [seed, minutes] : report.per_seed) {
    if (!(minutes >= 0.0) || !std::isfinite(minutes)) {
      throw Error(ErrorCode::RangeError, "minutes for seed '" + seed + "' must be finite and >= 0");
    }
    report.total += minutes;
  }
  const double n = static_cast<double>(report.per_seed.size());
  report.mean = report.total / n;
  double ss = 0.0;
  for (const auto& [_, minutes] : report.per_seed) ss += (minutes - report.mean) * (minutes - report.mean);
  report.sd = std::sqrt(ss / n);
  return report;
}

void to_json(nlohmann::json& j, const TimingReport& report) {
  j = nlohmann::json{{"per_seed", report.per_seed}, {"total", report.total}, {"mean", report.mean}, {"sd", report.sd}};
}

CurationSession CurationSession::start(const Corpus& corpus, const CurationRequest& request, Timestamp at) {
  nlohmann::json payload{{"session_id", request.session_id},
                         {"therapist_id", request.therapist_id},
                         {"patient_ref", request.patient_ref},
                         {"arm", to_string(request.arm)},
                         {"seeds", request.seeds},
                         {"target_per_seed", request.target_per_seed}};
  CurationSession session;
  session.append(&corpus, "start", std::move(payload), at);
  return session;
}

CurationSession CurationSession::replay(std::span<const Event> events, const Corpus& corpus) {
  if (events.empty()) throw Error(ErrorCode::SchemaError, "empty curation event log");
  CurationSession session;
  for (const Event& e : events) session.apply(&corpus, e);
  return session;
}

void CurationSession::attach_recommendations(const Corpus& corpus, std::string_view space_id, std::size_t r,
                                             Timestamp at) {
  append(&corpus, "attach", {{"space_id", space_id}, {"r", r}}, at);
}

void CurationSession::record_action(const Corpus& corpus, const ExpertAction& action) {
  nlohmann::json payload{{"kind", to_string(action.kind)},
                         {"seed_id", action.seed_id},
                         {"subject_id", action.subject_id},
                         {"reason", action.reason}};
  if (action.client_at) payload["client_at"] = *action.client_at;
  append(&corpus, "action", std::move(payload), action.at);
}

void CurationSession::finalize_curation(const Picks& picks, Timestamp at) {
  append(nullptr, "finalize", {{"picks", picks}}, at);
}

void CurationSession::mark_delivered(std::string_view seed_id, std::string_view guided_session_id,
                                     Timestamp at) {
  append(nullptr, "deliver", {{"seed_id", seed_id}, {"guided_session_id", guided_session_id}}, at);
}

void CurationSession::inject_timing(const std::map<std::string, double>& per_seed_minutes, Timestamp at) {
  append(nullptr, "timing", {{"per_seed", per_seed_minutes}}, at);
}

void CurationSession::append(const Corpus* corpus, std::string kind, nlohmann::json payload, Timestamp at) {
  CurationSession next = *this;
  next.apply(corpus, Event{version() + 1, at, std::move(kind), std::move(payload)});
  *this = std::move(next);
}

void CurationSession::apply(const Corpus* corpus, const Event& event) {
  if (event.seq != events_.size() + 1) {
    throw Error(ErrorCode::SchemaError, "expected seq " + std::to_string(events_.size() + 1) + ", got " +
                                            std::to_string(event.seq));
  }
  if (!events_.empty() && event.at < events_.back().at) {
    throw Error(ErrorCode::NonMonotonicTimestamp, "event time precedes the previous event");
  }
  const bool first = events_.empty();
  if (first != (event.kind == "start")) {
    throw Error(first ? ErrorCode::SchemaError : ErrorCode::IllegalTransition,
                first ? "curation log must begin with a start event" : "session already started");
  }
  try {
    auto need_corpus = [&]() -> const Corpus& {
      if (!corpus) throw Error(ErrorCode::InvalidArgument, "'" + event.kind + "' requires the corpus");
      return *corpus;
    };
    if (event.kind == "start") {
      apply_start(need_corpus(), event.payload);
    } else if (event.kind == "attach") {
      apply_attach(need_corpus(), event.payload, event.at);
    } else if (event.kind == "action") {
      apply_action(need_corpus(), event.payload, event.at);
    } else if (event.kind == "finalize") {
      apply_finalize(event.payload, event.at);
    } else if (event.kind == "deliver") {
      apply_deliver(event.payload);
    } else if (event.kind == "timing") {
      apply_timing(event.payload);
    } else {
      throw Error(ErrorCode::SchemaError, "unknown curation event kind '" + event.kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, "malformed '" + event.kind + "' payload: " + e.what());
  }
  events_.push_back(event);
}

void CurationSession::require_state(std::initializer_list<CurationState> allowed,
                                    std::string_view operation) const {
  if (std::find(allowed.begin(), allowed.end(), state_) == allowed.end()) {
    throw Error(ErrorCode::IllegalTransition, "cannot " + std::string(operation) + " in state " +
                                                  std::string(to_string(state_)));
  }
}

void CurationSession::apply_start(const Corpus& corpus, const nlohmann::json& p) {
  session_id_ = p.at("session_id").get<std::string>();
  therapist_id_ = p.at("therapist_id").get<std::string>();
  patient_ref_ = p.at("patient_ref").get<std::string>();
  arm_ = parse_arm(p.at("arm").get<std::string>());
  seeds_ = p.at("seeds").get<std::vector<std::string>>();
  target_per_seed_ = p.at("target_per_seed").get<std::size_t>();

  if (!valid_key(session_id_)) {
    throw Error(ErrorCode::InvalidArgument, "session id must match [A-Za-z0-9_-]+");
  }
  if (seeds_.empty()) throw Error(ErrorCode::EmptySeeds, "a curation needs at least one seed");
  if (seeds_.size() > kMaxSeeds) {
    throw Error(ErrorCode::TooManySeeds, std::to_string(seeds_.size()) + " seeds, at most " +
                                             std::to_string(kMaxSeeds));
  }
  if (target_per_seed_ == 0) throw Error(ErrorCode::InvalidArgument, "target_per_seed must be positive");
  for (const auto& seed : seeds_) {
    if (!corpus.catalog().contains(seed)) throw Error(ErrorCode::UnknownPainting, seed);
    if (!per_seed_.emplace(seed, SeedState{}).second) {
      throw Error(ErrorCode::InvalidArgument, "seed '" + seed + "' listed twice");
    }
  }
  state_ = CurationState::Elicited;
}

const EmbeddingSpace& CurationSession::list_space(const Corpus& corpus) const {
  return corpus.space(space_id_);
}

void CurationSession::apply_attach(const Corpus& corpus, const nlohmann::json& p, Timestamp at) {
  if (arm_ == Arm::ExpertOnly) {
    throw Error(ErrorCode::IllegalTransition, "expert_only sessions have no machine lists");
  }
  require_state({CurationState::Elicited}, "attach recommendations");
  space_id_ = p.at("space_id").get<std::string>();
  r_ = p.at("r").get<std::size_t>();
  const EmbeddingSpace& space = list_space(corpus);
  for (const auto& seed : seeds_) lists_[seed] = top_r(space, seed, r_, {}, at);
  state_ = CurationState::Recommended;
}

void CurationSession::apply_action(const Corpus& corpus, const nlohmann::json& p, Timestamp at) {
  if (arm_ == Arm::ExpertOnly) {
    require_state({CurationState::Elicited, CurationState::UnderReview}, "record an action");
  } else {
    require_state({CurationState::Recommended, CurationState::UnderReview}, "record an action");
  }

  ExpertAction action;
  action.at = at;
  action.kind = parse_action_kind(p.at("kind").get<std::string>());
  action.seed_id = p.at("seed_id").get<std::string>();
  action.subject_id = p.value("subject_id", "");
  action.reason = p.value("reason", "");
  if (auto it = p.find("client_at"); it != p.end() && !it->is_null()) action.client_at = it->get<std::int64_t>();

  if (!has_seed(action.seed_id)) throw Error(ErrorCode::UnknownSeed, action.seed_id);
  if (needs_reason(action.kind) && action.reason.empty()) {
    throw Error(ErrorCode::MissingReason, std::string(to_string(action.kind)) + " of '" + action.subject_id +
                                              "' needs a reason");
  }
  SeedState& seed = seed_state(action.seed_id);

  // A view without a subject means the seed's whole grid was opened.
  const bool grid_view = action.kind == ActionKind::View && action.subject_id.empty();
  if (needs_subject(action.kind) && !grid_view) {
    if (action.subject_id.empty() || !corpus.catalog().contains(action.subject_id)) {
      throw Error(ErrorCode::UnknownPainting, action.subject_id);
    }
    const bool reviewable = action.kind == ActionKind::Accept || action.kind == ActionKind::Reject ||
                            action.kind == ActionKind::Flag;
    if (reviewable && arm_ != Arm::ExpertOnly && !lists_.at(action.seed_id).contains(action.subject_id) &&
        !seed.manual.contains(action.subject_id)) {
      throw Error(ErrorCode::NotInList, action.seed_id + ": " + action.subject_id);
    }
  } else if (!action.subject_id.empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(action.kind)) + " takes no subject");
  }

  switch (action.kind) {
    case ActionKind::View:
      if (!seed.first_view) seed.first_view = at;
      break;
    case ActionKind::Reject:
      seed.rejected.insert(action.subject_id);
      seed.manual.erase(action.subject_id);
      break;
    case ActionKind::ManualAdd:
      seed.manual.insert(action.subject_id);
      break;
    case ActionKind::Regenerate: {
      if (arm_ == Arm::ExpertOnly) {
        throw Error(ErrorCode::IllegalTransition, "expert_only sessions have no list to regenerate");
      }
      lists_[action.seed_id] = regenerate(list_space(corpus), action.seed_id, r_, seed.rejected, at);
      break;
    }
    case ActionKind::Finalize:
      seed.done = at;
      break;
    case ActionKind::Accept:
    case ActionKind::Flag:
      break;
  }
  if (!seed.first_action) seed.first_action = at;
  actions_.push_back(std::move(action));
  state_ = CurationState::UnderReview;
}

void CurationSession::apply_finalize(const nlohmann::json& p, Timestamp at) {
  require_state({CurationState::UnderReview}, "finalize curation");
  const Picks picks = p.at("picks").get<Picks>();
  for (const auto& [seed_id, _] : picks) {
    if (!has_seed(seed_id)) throw Error(ErrorCode::UnknownSeed, seed_id);
  }
  for (const auto& seed_id : seeds_) {
    auto it = picks.find(seed_id);
    const std::size_t got = it == picks.end() ? 0 : it->second.size();
    if (got != target_per_seed_) {
      throw Error(ErrorCode::WrongPickCount, seed_id + ": got " + std::to_string(got) + ", want " +
                                                 std::to_string(target_per_seed_));
    }
    const SeedState& seed = per_seed_.find(seed_id)->second;
    std::set<std::string> seen;
    for (const auto& id : it->second) {
      if (!seen.insert(id).second) throw Error(ErrorCode::DuplicatePick, seed_id + ": " + id);
      const bool from_list = arm_ != Arm::ExpertOnly && lists_.at(seed_id).contains(id) &&
                             !seed.rejected.contains(id);
      if (!from_list && !seed.manual.contains(id)) throw Error(ErrorCode::NotInList, seed_id + ": " + id);
    }
  }
  curated_ = picks;
  finalized_at_ = at;
  state_ = CurationState::Curated;
}

void CurationSession::apply_deliver(const nlohmann::json& p) {
  require_state({CurationState::Curated, CurationState::Delivered}, "deliver a guided session");
  const auto seed_id = p.at("seed_id").get<std::string>();
  if (!has_seed(seed_id)) throw Error(ErrorCode::UnknownSeed, seed_id);
  deliveries_.emplace_back(seed_id, p.at("guided_session_id").get<std::string>());
  state_ = CurationState::Delivered;
}

void CurationSession::apply_timing(const nlohmann::json& p) {
  require_state({CurationState::UnderReview, CurationState::Curated, CurationState::Delivered},
                "inject timing");
  const auto minutes = p.at("per_seed").get<std::map<std::string, double>>();
  for (const auto& [seed_id, value] : minutes) {
    if (!has_seed(seed_id)) throw Error(ErrorCode::UnknownSeed, seed_id);
    if (!std::isfinite(value) || value < 0.0) {
      throw Error(ErrorCode::RangeError, seed_id + ": minutes must be finite and >= 0");
    }
  }
  for (const auto& [seed_id, value] : minutes) injected_minutes_[seed_id] = value;
}

TimingReport CurationSession::timing_report() const {
  require_state({CurationState::Curated, CurationState::Delivered}, "report timing");
  std::map<std::string, double> minutes;
  for (const auto& seed_id : seeds_) {
    if (auto it = injected_minutes_.find(seed_id); it != injected_minutes_.end()) {
      minutes[seed_id] = it->second;
      continue;
    }
    const SeedState& seed = per_seed_.find(seed_id)->second;
    const auto start = seed.first_view ? seed.first_view : seed.first_action;
    const auto end = seed.done ? seed.done : finalized_at_;
    minutes[seed_id] = start && end ? std::max(0.0, minutes_between(*start, *end)) : 0.0;
  }
  return make_timing_report(std::move(minutes));
}

const std::set<std::string>& CurationSession::rejected(std::string_view seed_id) const {
  auto it = per_seed_.find(seed_id);
  return it == per_seed_.end() ? kEmptySet : it->second.rejected;
}

const std::set<std::string>& CurationSession::manual(std::string_view seed_id) const {
  auto it = per_seed_.find(seed_id);
  return it == per_seed_.end() ? kEmptySet : it->second.manual;
}

bool CurationSession::has_seed(std::string_view seed_id) const { return per_seed_.find(seed_id) != per_seed_.end(); }

CurationSession::SeedState& CurationSession::seed_state(std::string_view seed_id) {
  auto it = per_seed_.find(seed_id);
  if (it == per_seed_.end()) throw Error(ErrorCode::UnknownSeed, std::string(seed_id));
  return it->second;
}

nlohmann::json CurationSession::to_json() const {
  nlohmann::json actions = nlohmann::json::array();
  for (const auto& a : actions_) {
    nlohmann::json entry{{"at", a.at.ms},
                         {"kind", to_string(a.kind)},
                         {"seed_id", a.seed_id},
                         {"subject_id", a.subject_id},
                         {"reason", a.reason}};
    if (a.client_at) entry["client_at"] = *a.client_at;
    actions.push_back(std::move(entry));
  }
  nlohmann::json lists = nlohmann::json::object();
  for (const auto& [seed, list] : lists_) lists[seed] = list;
  nlohmann::json rejected = nlohmann::json::object();
  nlohmann::json manual = nlohmann::json::object();
  for (const auto& [seed, s] : per_seed_) {
    rejected[seed] = s.rejected;
    manual[seed] = s.manual;
  }
  nlohmann::json deliveries = nlohmann::json::array();
  for (const auto& [seed, guided] : deliveries_) {
    deliveries.push_back({{"seed_id", seed}, {"guided_session_id", guided}});
  }
  return nlohmann::json{{"session_id", session_id_},
                        {"therapist_id", therapist_id_},
                        {"patient_ref", patient_ref_},
                        {"arm", to_string(arm_)},
                        {"state", to_string(state_)},
                        {"target_per_seed", target_per_seed_},
                        {"seeds", seeds_},
                        {"space_id", space_id_},
                        {"r", r_},
                        {"lists", std::move(lists)},
                        {"rejected", std::move(rejected)},
                        {"manual", std::move(manual)},
                        {"actions", std::move(actions)},
                        {"curated", curated_},
                        {"timing_overrides", injected_minutes_},
                        {"deliveries", std::move(deliveries)},
                        {"version", version()}};
}

}  // namespace artrec
