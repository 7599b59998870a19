#include "artrec/store.hpp"

#include <algorithm>
#include <fstream>

#include "artrec/catalog.hpp"
#include "artrec/error.hpp"

namespace artrec {

namespace {

void check_key(std::string_view key) {
  if (!is_valid_painting_id(key)) {
    throw Error(ErrorCode::InvalidArgument, "store key must match [A-Za-z0-9_-]+: '" + std::string(key) + "'");
  }
}

std::string cache_key(RecordKind kind, std::string_view key) {
  return std::string(to_string(kind)) + "/" + std::string(key);
}

}  // namespace

std::string_view to_string(RecordKind kind) noexcept {
  switch (kind) {
    case RecordKind::Catalog: return "catalog";
    case RecordKind::SpaceHeader: return "space_header";
    case RecordKind::SessionEvent: return "session_event";
    case RecordKind::GuidedSession: return "guided_session";
    case RecordKind::ThemeCode: return "theme_code";
  }
  return "?";
}

Store::Store(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create store '" + root_.string() + "': " + ec.message());
}

std::filesystem::path Store::log_path(RecordKind kind, std::string_view key) const {
  return root_ / std::string(to_string(kind)) / (std::string(key) + ".jsonl");
}

std::filesystem::path Store::doc_path(RecordKind kind, std::string_view key) const {
  return root_ / std::string(to_string(kind)) / (std::string(key) + ".json");
}

std::uint64_t Store::load_version(RecordKind kind, std::string_view key) const {
  const std::string ck = cache_key(kind, key);
  if (auto it = versions_.find(ck); it != versions_.end()) return it->second;
  std::uint64_t v = 0;
  if (std::filesystem::exists(log_path(kind, key))) {
    v = read_event_log(log_path(kind, key)).size();
  } else if (auto doc = doc_path(kind, key); std::filesystem::exists(doc)) {
    std::ifstream in(doc);
    v = nlohmann::json::parse(in).at("version").get<std::uint64_t>();
  }
  versions_.emplace(ck, v);
  return v;
}

std::uint64_t Store::append_events(RecordKind kind, std::string_view key, std::span<const Event> events,
                                   std::uint64_t expected_version) {
  check_key(key);
  std::lock_guard lock(mutex_);
  const std::uint64_t current = load_version(kind, key);
  if (current != expected_version) {
    throw Error(ErrorCode::VersionConflict, cache_key(kind, key) + " is at version " + std::to_string(current) +
                                                ", expected " + std::to_string(expected_version));
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].seq != current + i + 1) {
      throw Error(ErrorCode::SchemaError, "event seq " + std::to_string(events[i].seq) + " does not extend " +
                                              cache_key(kind, key));
    }
  }
  const auto path = log_path(kind, key);
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  for (const Event& e : events) out << to_jsonl_line(e);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
  const std::uint64_t next = current + events.size();
  versions_[cache_key(kind, key)] = next;
  return next;
}

std::vector<Event> Store::read_events(RecordKind kind, std::string_view key) const {
  check_key(key);
  std::lock_guard lock(mutex_);
  const auto path = log_path(kind, key);
  if (!std::filesystem::exists(path)) return {};
  return read_event_log(path);
}

std::uint64_t Store::version(RecordKind kind, std::string_view key) const {
  check_key(key);
  std::lock_guard lock(mutex_);
  return load_version(kind, key);
}

std::vector<std::string> Store::keys(RecordKind kind) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  const auto dir = root_ / std::string(to_string(kind));
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".jsonl" || ext == ".json")) out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Store::put_document(RecordKind kind, std::string_view key, const nlohmann::json& body,
                                  std::optional<std::uint64_t> expected_version) {
  check_key(key);
  std::lock_guard lock(mutex_);
  const std::uint64_t current = load_version(kind, key);
  if (expected_version && *expected_version != current) {
    throw Error(ErrorCode::VersionConflict, cache_key(kind, key) + " is at version " + std::to_string(current) +
                                                ", expected " + std::to_string(*expected_version));
  }
  const auto path = doc_path(kind, key);
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    out << nlohmann::json{{"version", current + 1}, {"body", body}}.dump() << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
  versions_[cache_key(kind, key)] = current + 1;
  return current + 1;
}

std::optional<StoreRecord> Store::get_document(RecordKind kind, std::string_view key) const {
  check_key(key);
  std::lock_guard lock(mutex_);
  const auto path = doc_path(kind, key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path);
  auto j = nlohmann::json::parse(in);
  return StoreRecord{kind, std::string(key), j.at("body"), j.at("version").get<std::uint64_t>()};
}

}  // namespace artrec
