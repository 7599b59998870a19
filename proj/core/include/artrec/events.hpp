#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/time.hpp"

namespace artrec {

/// One line of a session event log: {"seq", "at", "kind", "payload"}.
/// seq starts at 1 and increases by one per event.
struct Event {
  std::uint64_t seq = 0;
  Timestamp at;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const Event&) const = default;
};

void to_json(nlohmann::json& j, const Event& e);
void from_json(const nlohmann::json& j, Event& e);

/// Parses a JSON Lines event log; throws SchemaError on malformed lines or a
/// broken seq chain.
std::vector<Event> read_event_log(std::istream& in);
std::vector<Event> read_event_log(const std::filesystem::path& path);

std::string to_jsonl_line(const Event& e);

}  // namespace artrec
