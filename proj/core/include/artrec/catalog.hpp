#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace artrec {

struct Painting {
  std::string id;
  std::string title;
  std::string artist;
  std::string image_uri;
  std::string license;
  std::map<std::string, std::string> tags;

  bool operator==(const Painting&) const = default;
};

void to_json(nlohmann::json& j, const Painting& p);

/// Ids are restricted to `[A-Za-z0-9_-]+`.
bool is_valid_painting_id(std::string_view id) noexcept;

/// The painting universe. Immutable after construction; iteration follows
/// load order.
class Catalog {
 public:
  Catalog() = default;

  /// Throws DuplicateId or SchemaError when a record violates the invariants.
  Catalog(std::vector<Painting> paintings, std::string source_label);

  const std::vector<Painting>& paintings() const noexcept { return paintings_; }
  const std::string& source_label() const noexcept { return source_label_; }
  std::size_t size() const noexcept { return paintings_.size(); }
  bool empty() const noexcept { return paintings_.empty(); }

  bool contains(std::string_view id) const;

  /// Throws NotFound.
  const Painting& get(std::string_view id) const;

  /// nullptr when absent.
  const Painting* find(std::string_view id) const;

  /// Canonical JSON Lines form; loading this output yields an equal catalog.
  std::string to_jsonl() const;

 private:
  std::vector<Painting> paintings_;
  std::string source_label_;
  std::unordered_map<std::string, std::size_t> index_;
};

Catalog parse_catalog(std::istream& in, std::string source_label);

/// Reads a JSON Lines catalog. Blank lines are skipped; SchemaError carries
/// the 1-based line number.
Catalog load_catalog(const std::filesystem::path& path);

/// Free-function form of Catalog::get.
const Painting& get_painting(const Catalog& catalog, std::string_view id);

}  // namespace artrec
