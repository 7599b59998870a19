#include "artrec/events.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include "artrec/error.hpp"

namespace artrec {

void to_json(nlohmann::json& j, const Event& e) {
  j = nlohmann::json{{"seq", e.seq}, {"at", e.at.ms}, {"kind", e.kind}, {"payload", e.payload}};
}

void from_json(const nlohmann::json& j, Event& e) {
  e.seq = j.at("seq").get<std::uint64_t>();
  e.at = {j.at("at").get<std::int64_t>()};
  e.kind = j.at("kind").get<std::string>();
  e.payload = j.value("payload", nlohmann::json::object());
}

std::string to_jsonl_line(const Event& e) { return nlohmann::json(e).dump() + "\n"; }

std::vector<Event> read_event_log(std::istream& in) {
  std::vector<Event> events;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    Event e;
    try {
      e = nlohmann::json::parse(text).get<Event>();
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::SchemaError, "event log line " + std::to_string(line) + ": " + ex.what());
    }
    if (e.seq != events.size() + 1) {
      throw Error(ErrorCode::SchemaError, "event log line " + std::to_string(line) + ": expected seq " +
                                              std::to_string(events.size() + 1) + ", got " +
                                              std::to_string(e.seq));
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<Event> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read event log '" + path.string() + "'");
  return read_event_log(in);
}

}  // namespace artrec
