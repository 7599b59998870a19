#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace artrec {

/// Deployment configuration, read from a `key = value` file:
///
///   # paths are relative to the config file
///   catalog        = "data/catalog.jsonl"
///   space.visual   = "data/visual.jsonl"
///   space.multimodal = "data/multimodal.vaem"
///   r_default      = 200
///   store_dir      = "store"
///   matrix_limit   = 4096
///   host           = "127.0.0.1"
///   port           = 8080
///   lexicon        = "lexicon.txt"          (optional)
///   sentiment_url  = "http://127.0.0.1:9000/classify"   (optional)
///   themes         = "awe, safety, ..."     (optional, replaces the default set)
struct Config {
  std::filesystem::path catalog;
  std::map<std::string, std::filesystem::path> spaces;
  std::size_t r_default = 200;
  std::filesystem::path store_dir = "store";
  std::size_t matrix_limit = 4096;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::string> sentiment_url;
  std::vector<std::string> themes;
};

/// Throws ConfigError naming the line and key.
Config parse_config(std::istream& in, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);

}  // namespace artrec
