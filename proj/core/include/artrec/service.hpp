#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/config.hpp"
#include "artrec/corpus.hpp"
#include "artrec/curation.hpp"
#include "artrec/sentiment.hpp"
#include "artrec/session.hpp"
#include "artrec/store.hpp"
#include "artrec/themes.hpp"
#include "artrec/time.hpp"

namespace artrec {

/// Loads the catalog and every configured space. Errors name the failing
/// file.
std::shared_ptr<Corpus> load_corpus(const Config& config);

/// Application facade behind the HTTP endpoints and the CLI. Every mutating
/// call is a thin wrapper over one module operation: it validates the
/// request, runs the operation on a copy of the session, appends the new
/// events to the store and only then publishes the new state.
///
/// Requests and responses are JSON documents. Mutating requests may carry
/// `"version"`; a stale value fails with VersionConflict. Writes to one
/// session are serialized; different sessions proceed independently.
class Service {
 public:
  /// Ingests the corpus and replays every persisted session.
  Service(const Config& config, Clock clock = system_clock(),
          std::shared_ptr<const SentimentClassifier> classifier = nullptr);
  Service(std::shared_ptr<const Corpus> corpus, const Config& config, Clock clock = system_clock(),
          std::shared_ptr<const SentimentClassifier> classifier = nullptr);

  const Corpus& corpus() const noexcept { return *corpus_; }
  const Config& config() const noexcept { return config_; }
  Store& store() noexcept { return store_; }

  nlohmann::json healthz() const;

  nlohmann::json list_paintings() const;
  nlohmann::json get_painting(std::string_view id) const;
  nlohmann::json list_spaces() const;
  /// {space_id, seed_id, r?, excluded?}
  nlohmann::json recommend(const nlohmann::json& request) const;

  /// {session_id?, therapist_id, patient_ref, arm, seeds, target_per_seed?}
  nlohmann::json create_curation(const nlohmann::json& request);
  /// {space_id?, r?, version?}; space defaults to "visual"/"multimodal" by arm.
  nlohmann::json attach(std::string_view curation_id, const nlohmann::json& request);
  /// {kind, seed_id, subject_id?, reason?, at?, version?}; `at` is the advisory client time.
  nlohmann::json record_action(std::string_view curation_id, const nlohmann::json& request);
  /// {picks: {seed: [ids]}, version?}
  nlohmann::json finalize(std::string_view curation_id, const nlohmann::json& request);
  /// {per_seed: {seed: minutes}, version?}
  nlohmann::json inject_timing(std::string_view curation_id, const nlohmann::json& request);
  nlohmann::json get_curation(std::string_view curation_id) const;
  nlohmann::json timing(std::string_view curation_id) const;

  /// {curation_id, seed_id, session_id?, prompts?}
  nlohmann::json build_session(const nlohmann::json& request);
  nlohmann::json record_pre(std::string_view session_id, const nlohmann::json& request);
  nlohmann::json record_post(std::string_view session_id, const nlohmann::json& request);
  /// {painting_id, text, version?}
  nlohmann::json record_reflection(std::string_view session_id, const nlohmann::json& request);
  nlohmann::json record_ratings(std::string_view session_id, const nlohmann::json& request);
  nlohmann::json get_session(std::string_view session_id) const;

  // Analytics cover complete sessions only; the response reports how many
  // sessions were left out.
  nlohmann::json mood() const;
  nlohmann::json panas() const;
  nlohmann::json ratings() const;
  /// Every guided session, complete or not.
  std::string export_csv() const;

  /// {text}
  nlohmann::json classify(const nlohmann::json& request) const;
  /// {reflection_ref, theme, coder_id}
  nlohmann::json record_theme(const nlohmann::json& request);
  nlohmann::json themes(std::string_view reflection_ref) const;

  std::vector<std::string> curation_ids() const;
  std::vector<std::string> session_ids() const;
  std::vector<GuidedSession> guided_sessions() const;
  const SentimentClassifier& classifier() const noexcept { return *classifier_; }

 private:
  template <class T>
  struct Slot {
    std::mutex write;
    T value;
    explicit Slot(T v) : value(std::move(v)) {}
  };

  Slot<CurationSession>& curation_slot(std::string_view id) const;
  Slot<GuidedSession>& session_slot(std::string_view id) const;
  void recover();
  Timestamp now_after(Timestamp last) const;

  template <class Op>
  nlohmann::json mutate_curation(std::string_view id, const nlohmann::json& request, Op op);
  template <class Op>
  nlohmann::json mutate_session(std::string_view id, const nlohmann::json& request, Op op);

  std::shared_ptr<const Corpus> corpus_;
  Config config_;
  Clock clock_;
  std::shared_ptr<const SentimentClassifier> classifier_;
  Store store_;

  mutable std::shared_mutex index_mutex_;
  std::map<std::string, std::unique_ptr<Slot<CurationSession>>, std::less<>> curations_;
  std::map<std::string, std::unique_ptr<Slot<GuidedSession>>, std::less<>> sessions_;

  mutable std::mutex themes_mutex_;
  ThemeCodebook codebook_;
};

}  // namespace artrec
