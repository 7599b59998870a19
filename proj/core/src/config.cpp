#include "artrec/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "artrec/error.hpp"

namespace artrec {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Quoted values run to the closing quote; bare values end at a `#` comment.
std::string parse_value(const std::string& v) {
  if (!v.empty() && (v.front() == '"' || v.front() == '\'')) {
    const auto close = v.find(v.front(), 1);
    if (close != std::string::npos) return v.substr(1, close - 1);
  }
  return trim(std::string_view(v).substr(0, v.find('#')));
}

std::size_t parse_size(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": '" + key + "' expects an integer");
  }
  return out;
}

}  // namespace

Config parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  Config config;
  bool have_catalog = false;
  auto resolve = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string content = trim(text);
    if (content.empty() || content.front() == '#' || content.front() == '[') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = parse_value(trim(std::string_view(content).substr(eq + 1)));

    if (key == "catalog") {
      config.catalog = resolve(value);
      have_catalog = true;
    } else if (key.rfind("space.", 0) == 0 && key.size() > 6) {
      config.spaces[key.substr(6)] = resolve(value);
    } else if (key == "r_default") {
      config.r_default = parse_size(key, value, line);
      if (config.r_default == 0) throw Error(ErrorCode::ConfigError, "r_default must be positive");
    } else if (key == "store_dir") {
      config.store_dir = resolve(value);
    } else if (key == "matrix_limit") {
      config.matrix_limit = parse_size(key, value, line);
    } else if (key == "host") {
      config.host = value;
    } else if (key == "port") {
      const std::size_t port = parse_size(key, value, line);
      if (port > 65535) throw Error(ErrorCode::ConfigError, "port out of range");
      config.port = static_cast<int>(port);
    } else if (key == "lexicon") {
      config.lexicon = resolve(value);
    } else if (key == "sentiment_url") {
      config.sentiment_url = value;
    } else if (key == "themes") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string item = trim(rest.substr(0, comma));
        if (!item.empty()) config.themes.push_back(std::move(item));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
    } else {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (!have_catalog) throw Error(ErrorCode::ConfigError, "missing 'catalog'");
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

}  // namespace artrec
