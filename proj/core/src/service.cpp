#include "artrec/service.hpp"

#include <algorithm>
#include <cstdio>
#include <span>

#include "artrec/analytics.hpp"
#include "artrec/error.hpp"
#include "artrec/recsys.hpp"
#include "artrec/report.hpp"

namespace artrec {

namespace {

constexpr std::string_view kThemeLog = "codes";

const nlohmann::json& field(const nlohmann::json& req, const char* key) {
  if (!req.is_object()) throw Error(ErrorCode::SchemaError, "request body must be a JSON object");
  auto it = req.find(key);
  if (it == req.end() || it->is_null()) throw Error(ErrorCode::SchemaError, std::string("missing '") + key + "'");
  return *it;
}

bool has(const nlohmann::json& req, const char* key) {
  return req.is_object() && req.contains(key) && !req.at(key).is_null();
}

std::string get_string(const nlohmann::json& req, const char* key) {
  const auto& v = field(req, key);
  if (!v.is_string()) throw Error(ErrorCode::SchemaError, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::string opt_string(const nlohmann::json& req, const char* key, std::string fallback = {}) {
  return has(req, key) ? get_string(req, key) : std::move(fallback);
}

std::uint64_t get_uint(const nlohmann::json& req, const char* key) {
  const auto& v = field(req, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw Error(ErrorCode::SchemaError, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

template <class T>
T convert(const nlohmann::json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::SchemaError, std::string("'") + key + "' has the wrong shape");
  }
}

void check_version(const nlohmann::json& req, std::uint64_t current) {
  if (!has(req, "version")) return;
  const std::uint64_t expected = get_uint(req, "version");
  if (expected != current) {
    throw Error(ErrorCode::VersionConflict,
                "at version " + std::to_string(current) + ", request expected " + std::to_string(expected));
  }
}

std::string next_id(const char* prefix, std::size_t n, auto&& taken) {
  for (;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%04zu", prefix, n);
    if (!taken(buf)) return buf;
  }
}

std::string default_space_for(Arm arm) {
  return arm == Arm::HitlMultimodal ? "multimodal" : "visual";
}

}  // namespace

std::shared_ptr<Corpus> load_corpus(const Config& config) {
  std::shared_ptr<const Catalog> catalog;
  try {
    catalog = std::make_shared<const Catalog>(load_catalog(config.catalog));
  } catch (const Error& e) {
    throw Error(e.code(), config.catalog.string() + ": " + e.what());
  }
  auto corpus = std::make_shared<Corpus>(catalog);
  for (const auto& [space_id, path] : config.spaces) {
    try {
      if (!std::filesystem::exists(path)) throw Error(ErrorCode::IoError, "no such file");
      EmbeddingHeader binary_header{space_id, "", 0, false};
      auto raw = read_embeddings(path, binary_header);
      if (raw.header.space != space_id) {
        throw Error(ErrorCode::ConfigError, "header names space '" + raw.header.space + "', config says '" +
                                                space_id + "'");
      }
      corpus->add_space(std::make_shared<const EmbeddingSpace>(*catalog, raw));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  return corpus;
}

Service::Service(const Config& config, Clock clock, std::shared_ptr<const SentimentClassifier> classifier)
    : Service(load_corpus(config), config, std::move(clock), std::move(classifier)) {}

Service::Service(std::shared_ptr<const Corpus> corpus, const Config& config, Clock clock,
                 std::shared_ptr<const SentimentClassifier> classifier)
    : corpus_(std::move(corpus)),
      config_(config),
      clock_(std::move(clock)),
      classifier_(std::move(classifier)),
      store_(config.store_dir),
      codebook_(config.themes.empty() ? ThemeTaxonomy{} : ThemeTaxonomy{config.themes}) {
  if (!classifier_) {
    classifier_ = config_.lexicon ? std::make_shared<const LexiconClassifier>(LexiconClassifier::from_file(*config_.lexicon))
                                  : std::make_shared<const LexiconClassifier>(LexiconClassifier::builtin());
  }
  recover();
}

void Service::recover() {
  const Catalog& catalog = corpus_->catalog();
  const nlohmann::json catalog_doc{{"source_label", catalog.source_label()}, {"count", catalog.size()}};
  auto existing = store_.get_document(RecordKind::Catalog, "catalog");
  if (!existing || existing->body != catalog_doc) store_.put_document(RecordKind::Catalog, "catalog", catalog_doc);
  for (const auto& id : corpus_->space_ids()) {
    const auto& space = corpus_->space(id);
    const nlohmann::json doc{{"space", space.space_id()},
                             {"model", space.model_name()},
                             {"dim", space.dim()},
                             {"count", space.size()},
                             {"zero_vectors", space.zero_vectors()}};
    if (!is_valid_painting_id(id)) continue;
    auto prev = store_.get_document(RecordKind::SpaceHeader, id);
    if (!prev || prev->body != doc) store_.put_document(RecordKind::SpaceHeader, id, doc);
  }

  for (const auto& key : store_.keys(RecordKind::SessionEvent)) {
    const auto events = store_.read_events(RecordKind::SessionEvent, key);
    curations_.emplace(key, std::make_unique<Slot<CurationSession>>(CurationSession::replay(events, *corpus_)));
  }
  for (const auto& key : store_.keys(RecordKind::GuidedSession)) {
    const auto events = store_.read_events(RecordKind::GuidedSession, key);
    sessions_.emplace(key, std::make_unique<Slot<GuidedSession>>(GuidedSession::replay(events)));
  }
  for (const Event& e : store_.read_events(RecordKind::ThemeCode, kThemeLog)) {
    const auto code = e.payload.get<ThemeCode>();
    codebook_.record_theme_code(code.reflection_ref, code.theme, code.coder_id, code.at);
  }
}

Timestamp Service::now_after(Timestamp last) const { return std::max(clock_(), last); }

Service::Slot<CurationSession>& Service::curation_slot(std::string_view id) const {
  std::shared_lock lock(index_mutex_);
  auto it = curations_.find(id);
  if (it == curations_.end()) throw Error(ErrorCode::NotFound, "curation '" + std::string(id) + "'");
  return *it->second;
}

Service::Slot<GuidedSession>& Service::session_slot(std::string_view id) const {
  std::shared_lock lock(index_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "guided session '" + std::string(id) + "'");
  return *it->second;
}

template <class Op>
nlohmann::json Service::mutate_curation(std::string_view id, const nlohmann::json& request, Op op) {
  auto& slot = curation_slot(id);
  std::lock_guard lock(slot.write);
  check_version(request, slot.value.version());
  CurationSession next = slot.value;
  op(next, now_after(next.events().back().at));
  const auto& events = next.events();
  store_.append_events(RecordKind::SessionEvent, id,
                       std::span<const Event>(events).subspan(slot.value.version()), slot.value.version());
  slot.value = std::move(next);
  return slot.value.to_json();
}

template <class Op>
nlohmann::json Service::mutate_session(std::string_view id, const nlohmann::json& request, Op op) {
  auto& slot = session_slot(id);
  std::lock_guard lock(slot.write);
  check_version(request, slot.value.version());
  GuidedSession next = slot.value;
  op(next, now_after(next.events().back().at));
  const auto& events = next.events();
  store_.append_events(RecordKind::GuidedSession, id,
                       std::span<const Event>(events).subspan(slot.value.version()), slot.value.version());
  slot.value = std::move(next);
  return slot.value.to_json();
}

nlohmann::json Service::healthz() const {
  return {{"status", "ok"}, {"paintings", corpus_->catalog().size()}, {"spaces", corpus_->space_ids()}};
}

nlohmann::json Service::list_paintings() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : corpus_->catalog().paintings()) out.push_back(p);
  return out;
}

nlohmann::json Service::get_painting(std::string_view id) const { return corpus_->catalog().get(id); }

nlohmann::json Service::list_spaces() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& id : corpus_->space_ids()) {
    const auto& s = corpus_->space(id);
    out.push_back({{"space_id", s.space_id()},
                   {"model", s.model_name()},
                   {"dim", s.dim()},
                   {"count", s.size()},
                   {"normalized", s.normalized()},
                   {"zero_vectors", s.zero_vectors()}});
  }
  return out;
}

nlohmann::json Service::recommend(const nlohmann::json& request) const {
  const auto& space = corpus_->space(get_string(request, "space_id"));
  const auto seed = get_string(request, "seed_id");
  const std::size_t r = has(request, "r") ? get_uint(request, "r") : config_.r_default;
  std::set<std::string> excluded;
  if (has(request, "excluded")) excluded = convert<std::set<std::string>>(request.at("excluded"), "excluded");
  return top_r(space, seed, r, excluded, clock_());
}

nlohmann::json Service::create_curation(const nlohmann::json& request) {
  CurationRequest req;
  req.therapist_id = get_string(request, "therapist_id");
  req.patient_ref = opt_string(request, "patient_ref");
  req.arm = parse_arm(get_string(request, "arm"));
  req.seeds = convert<std::vector<std::string>>(field(request, "seeds"), "seeds");
  if (has(request, "target_per_seed")) req.target_per_seed = get_uint(request, "target_per_seed");

  std::unique_lock lock(index_mutex_);
  req.session_id = has(request, "session_id")
                       ? get_string(request, "session_id")
                       : next_id("cur", curations_.size() + 1, [&](const std::string& k) { return curations_.contains(k); });
  if (curations_.contains(req.session_id)) throw Error(ErrorCode::DuplicateId, "curation '" + req.session_id + "'");
  auto session = CurationSession::start(*corpus_, req, clock_());
  store_.append_events(RecordKind::SessionEvent, req.session_id, session.events(), 0);
  auto [it, _] = curations_.emplace(req.session_id, std::make_unique<Slot<CurationSession>>(std::move(session)));
  return it->second->value.to_json();
}

nlohmann::json Service::attach(std::string_view curation_id, const nlohmann::json& request) {
  return mutate_curation(curation_id, request, [&](CurationSession& s, Timestamp at) {
    const std::string space_id = opt_string(request, "space_id", default_space_for(s.arm()));
    const std::size_t r = has(request, "r") ? get_uint(request, "r") : config_.r_default;
    s.attach_recommendations(*corpus_, space_id, r, at);
  });
}

nlohmann::json Service::record_action(std::string_view curation_id, const nlohmann::json& request) {
  return mutate_curation(curation_id, request, [&](CurationSession& s, Timestamp at) {
    ExpertAction action;
    action.at = at;
    action.kind = parse_action_kind(get_string(request, "kind"));
    action.seed_id = get_string(request, "seed_id");
    action.subject_id = opt_string(request, "subject_id");
    action.reason = opt_string(request, "reason");
    if (has(request, "at")) action.client_at = convert<std::int64_t>(request.at("at"), "at");
    s.record_action(*corpus_, action);
  });
}

nlohmann::json Service::finalize(std::string_view curation_id, const nlohmann::json& request) {
  return mutate_curation(curation_id, request, [&](CurationSession& s, Timestamp at) {
    s.finalize_curation(convert<Picks>(field(request, "picks"), "picks"), at);
  });
}

nlohmann::json Service::inject_timing(std::string_view curation_id, const nlohmann::json& request) {
  return mutate_curation(curation_id, request, [&](CurationSession& s, Timestamp at) {
    s.inject_timing(convert<std::map<std::string, double>>(field(request, "per_seed"), "per_seed"), at);
  });
}

nlohmann::json Service::get_curation(std::string_view curation_id) const {
  auto& slot = curation_slot(curation_id);
  std::lock_guard lock(slot.write);
  return slot.value.to_json();
}

nlohmann::json Service::timing(std::string_view curation_id) const {
  auto& slot = curation_slot(curation_id);
  std::lock_guard lock(slot.write);
  return slot.value.timing_report();
}

nlohmann::json Service::build_session(const nlohmann::json& request) {
  const auto curation_id = get_string(request, "curation_id");
  const auto seed_id = get_string(request, "seed_id");
  std::vector<std::string> prompts = default_prompts();
  if (has(request, "prompts")) prompts = convert<std::vector<std::string>>(request.at("prompts"), "prompts");

  auto& slot = curation_slot(curation_id);
  std::lock_guard curation_lock(slot.write);
  std::unique_lock index_lock(index_mutex_);
  const std::string session_id =
      has(request, "session_id")
          ? get_string(request, "session_id")
          : next_id("gs", sessions_.size() + 1, [&](const std::string& k) { return sessions_.contains(k); });
  if (sessions_.contains(session_id)) throw Error(ErrorCode::DuplicateId, "guided session '" + session_id + "'");

  CurationSession curation = slot.value;
  const Timestamp at = now_after(curation.events().back().at);
  GuidedSession guided = GuidedSession::build(curation, seed_id, session_id, at, std::move(prompts));

  store_.append_events(RecordKind::GuidedSession, session_id, guided.events(), 0);
  store_.append_events(RecordKind::SessionEvent, curation_id,
                       std::span<const Event>(curation.events()).subspan(slot.value.version()),
                       slot.value.version());
  slot.value = std::move(curation);
  auto [it, _] = sessions_.emplace(session_id, std::make_unique<Slot<GuidedSession>>(std::move(guided)));
  return it->second->value.to_json();
}

nlohmann::json Service::record_pre(std::string_view session_id, const nlohmann::json& request) {
  return mutate_session(session_id, request, [&](GuidedSession& s, Timestamp at) {
    s.record_pre(bundle_from_json(request), at);
  });
}

nlohmann::json Service::record_post(std::string_view session_id, const nlohmann::json& request) {
  return mutate_session(session_id, request, [&](GuidedSession& s, Timestamp at) {
    s.record_post(bundle_from_json(request), at);
  });
}

nlohmann::json Service::record_reflection(std::string_view session_id, const nlohmann::json& request) {
  return mutate_session(session_id, request, [&](GuidedSession& s, Timestamp at) {
    s.record_reflection(get_string(request, "painting_id"), get_string(request, "text"), at);
  });
}

nlohmann::json Service::record_ratings(std::string_view session_id, const nlohmann::json& request) {
  return mutate_session(session_id, request, [&](GuidedSession& s, Timestamp at) {
    nlohmann::json body = request;
    if (body.is_object()) body.erase("version");
    s.record_ratings(ratings_from_json(body), at);
  });
}

nlohmann::json Service::get_session(std::string_view session_id) const {
  auto& slot = session_slot(session_id);
  std::lock_guard lock(slot.write);
  return slot.value.to_json();
}

std::vector<std::string> Service::curation_ids() const {
  std::shared_lock lock(index_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : curations_) ids.push_back(id);
  return ids;
}

std::vector<std::string> Service::session_ids() const {
  std::shared_lock lock(index_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : sessions_) ids.push_back(id);
  return ids;
}

std::vector<GuidedSession> Service::guided_sessions() const {
  std::vector<GuidedSession> out;
  for (const auto& id : session_ids()) {
    auto& slot = session_slot(id);
    std::lock_guard lock(slot.write);
    out.push_back(slot.value);
  }
  return out;
}

namespace {

template <class Summarize>
nlohmann::json complete_only(const std::vector<GuidedSession>& all, Summarize summarize) {
  std::vector<GuidedSession> complete;
  std::copy_if(all.begin(), all.end(), std::back_inserter(complete),
               [](const GuidedSession& s) { return s.is_complete(); });
  nlohmann::json out = to_json(summarize(std::span<const GuidedSession>(complete)));
  out["excluded_incomplete"] = all.size() - complete.size();
  return out;
}

}  // namespace

nlohmann::json Service::mood() const { return complete_only(guided_sessions(), [](auto s) { return mood_summary(s); }); }

nlohmann::json Service::panas() const {
  return complete_only(guided_sessions(), [](auto s) { return panas_summary(s); });
}

nlohmann::json Service::ratings() const {
  return complete_only(guided_sessions(), [](auto s) { return rating_summary(s); });
}

std::string Service::export_csv() const { return export_sessions_csv(guided_sessions(), classifier_.get()); }

nlohmann::json Service::classify(const nlohmann::json& request) const {
  return classify_sentiment(get_string(request, "text"), *classifier_);
}

nlohmann::json Service::record_theme(const nlohmann::json& request) {
  std::lock_guard lock(themes_mutex_);
  ThemeCodebook next = codebook_;
  const ThemeCode& code = next.record_theme_code(get_string(request, "reflection_ref"), get_string(request, "theme"),
                                                 get_string(request, "coder_id"), clock_());
  const std::uint64_t version = codebook_.codes().size();
  const Event event{version + 1, code.at, "theme_code", code};
  store_.append_events(RecordKind::ThemeCode, kThemeLog, std::span<const Event>(&event, 1), version);
  nlohmann::json out = code;
  codebook_ = std::move(next);
  return out;
}

nlohmann::json Service::themes(std::string_view reflection_ref) const {
  std::lock_guard lock(themes_mutex_);
  return codebook_.codes_for(reflection_ref);
}

}  // namespace artrec
