#include "artrec/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "artrec/error.hpp"

namespace artrec {

namespace {

std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::SchemaError,
                "line " + std::to_string(line) + ": missing or non-string field '" + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

bool is_valid_painting_id(std::string_view id) noexcept {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  });
}

void to_json(nlohmann::json& j, const Painting& p) {
  j = nlohmann::json{{"id", p.id},
                     {"title", p.title},
                     {"artist", p.artist},
                     {"image_uri", p.image_uri},
                     {"license", p.license},
                     {"tags", p.tags}};
}

Catalog::Catalog(std::vector<Painting> paintings, std::string source_label)
    : paintings_(std::move(paintings)), source_label_(std::move(source_label)) {
  index_.reserve(paintings_.size());
  for (std::size_t i = 0; i < paintings_.size(); ++i) {
    const Painting& p = paintings_[i];
    if (!is_valid_painting_id(p.id)) {
      throw Error(ErrorCode::SchemaError, "invalid painting id '" + p.id + "'");
    }
    if (p.image_uri.empty()) {
      throw Error(ErrorCode::SchemaError, "painting '" + p.id + "' has an empty image_uri");
    }
    if (!index_.emplace(p.id, i).second) {
      throw Error(ErrorCode::DuplicateId, p.id);
    }
  }
}

bool Catalog::contains(std::string_view id) const { return find(id) != nullptr; }

const Painting* Catalog::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &paintings_[it->second];
}

const Painting& Catalog::get(std::string_view id) const {
  if (const Painting* p = find(id)) return *p;
  throw Error(ErrorCode::NotFound, std::string(id));
}

std::string Catalog::to_jsonl() const {
  std::string out;
  for (const Painting& p : paintings_) {
    out += nlohmann::json(p).dump();
    out += '\n';
  }
  return out;
}

Catalog parse_catalog(std::istream& in, std::string source_label) {
  std::vector<Painting> paintings;
  std::unordered_map<std::string, std::size_t> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": not an object");
    }

    Painting p;
    p.id = required_string(obj, "id", line);
    p.title = required_string(obj, "title", line);
    p.image_uri = required_string(obj, "image_uri", line);
    p.license = required_string(obj, "license", line);
    if (auto it = obj.find("artist"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": 'artist' must be a string");
      }
      p.artist = it->get<std::string>();
    }
    if (auto it = obj.find("tags"); it != obj.end() && !it->is_null()) {
      if (!it->is_object()) {
        throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": 'tags' must be an object");
      }
      for (const auto& [key, value] : it->items()) {
        // Non-string metadata is kept in its JSON text form.
        p.tags.emplace(key, value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
    if (!is_valid_painting_id(p.id)) {
      throw Error(ErrorCode::SchemaError,
                  "line " + std::to_string(line) + ": invalid painting id '" + p.id + "'");
    }
    if (p.image_uri.empty()) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": empty image_uri");
    }
    if (!seen.emplace(p.id, line).second) {
      throw Error(ErrorCode::DuplicateId, p.id);
    }
    paintings.push_back(std::move(p));
  }
  return Catalog(std::move(paintings), std::move(source_label));
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read catalog '" + path.string() + "'");
  }
  return parse_catalog(in, path.filename().string());
}

const Painting& get_painting(const Catalog& catalog, std::string_view id) { return catalog.get(id); }

}  // namespace artrec
