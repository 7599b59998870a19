#include "artrec/themes.hpp"

#include <algorithm>

#include "artrec/error.hpp"

namespace artrec {

const std::vector<std::string>& ThemeTaxonomy::default_themes() {
  static const std::vector<std::string> themes = {
      "hope_and_purpose", "rejuvenation", "engagement",
      "safety",           "sensory_pleasure", "relevance",
      "personal_preference", "togetherness_vs_solitude", "awe",
      "escape_and_refuge",
  };
  return themes;
}

ThemeTaxonomy::ThemeTaxonomy() : themes_(default_themes()) {}

ThemeTaxonomy::ThemeTaxonomy(std::vector<std::string> themes) : themes_(std::move(themes)) {
  if (themes_.empty()) throw Error(ErrorCode::ConfigError, "theme taxonomy is empty");
}

bool ThemeTaxonomy::contains(std::string_view theme) const {
  return std::find(themes_.begin(), themes_.end(), theme) != themes_.end();
}

void to_json(nlohmann::json& j, const ThemeCode& code) {
  j = nlohmann::json{{"reflection_ref", code.reflection_ref},
                     {"theme", code.theme},
                     {"coder_id", code.coder_id},
                     {"at", code.at.ms}};
}

void from_json(const nlohmann::json& j, ThemeCode& code) {
  code.reflection_ref = j.at("reflection_ref").get<std::string>();
  code.theme = j.at("theme").get<std::string>();
  code.coder_id = j.at("coder_id").get<std::string>();
  code.at = {j.value("at", std::int64_t{0})};
}

ThemeCodebook::ThemeCodebook(ThemeTaxonomy taxonomy) : taxonomy_(std::move(taxonomy)) {}

const ThemeCode& ThemeCodebook::record_theme_code(std::string_view reflection_ref, std::string_view theme,
                                                  std::string_view coder_id, Timestamp at) {
  if (!taxonomy_.contains(theme)) throw Error(ErrorCode::UnknownTheme, std::string(theme));
  if (reflection_ref.empty()) throw Error(ErrorCode::InvalidArgument, "theme code needs a reflection reference");
  codes_.push_back({std::string(reflection_ref), std::string(theme), std::string(coder_id), at});
  return codes_.back();
}

std::vector<ThemeCode> ThemeCodebook::codes_for(std::string_view reflection_ref) const {
  std::vector<ThemeCode> out;
  std::copy_if(codes_.begin(), codes_.end(), std::back_inserter(out),
               [&](const ThemeCode& c) { return c.reflection_ref == reflection_ref; });
  return out;
}

}  // namespace artrec
