#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/events.hpp"

namespace artrec {

enum class RecordKind { Catalog, SpaceHeader, SessionEvent, GuidedSession, ThemeCode };

std::string_view to_string(RecordKind kind) noexcept;

struct StoreRecord {
  RecordKind kind = RecordKind::Catalog;
  std::string key;
  nlohmann::json body;
  std::uint64_t version = 0;
};

/// Filesystem document/event store.
///
///   <root>/session_event/<key>.jsonl   curation event logs
///   <root>/guided_session/<key>.jsonl  guided session event logs
///   <root>/theme_code/<key>.jsonl      theme code logs
///   <root>/catalog/<key>.json          snapshot documents {"version", "body"}
///   <root>/space_header/<key>.json
///
/// Versions are optimistic: an event log's version is its event count, a
/// document's is its write count. Writes with a stale expected version fail
/// with VersionConflict. Event appends are flushed before returning.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Appends events whose seqs continue the log. Returns the new version.
  std::uint64_t append_events(RecordKind kind, std::string_view key, std::span<const Event> events,
                              std::uint64_t expected_version);

  std::vector<Event> read_events(RecordKind kind, std::string_view key) const;
  std::uint64_t version(RecordKind kind, std::string_view key) const;
  /// Keys of every log of `kind`, sorted.
  std::vector<std::string> keys(RecordKind kind) const;

  /// When `expected_version` is set it must equal the stored version.
  std::uint64_t put_document(RecordKind kind, std::string_view key, const nlohmann::json& body,
                             std::optional<std::uint64_t> expected_version = std::nullopt);
  std::optional<StoreRecord> get_document(RecordKind kind, std::string_view key) const;

 private:
  std::filesystem::path log_path(RecordKind kind, std::string_view key) const;
  std::filesystem::path doc_path(RecordKind kind, std::string_view key) const;
  std::uint64_t load_version(RecordKind kind, std::string_view key) const;

  std::filesystem::path root_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::uint64_t, std::less<>> versions_;
};

}  // namespace artrec
