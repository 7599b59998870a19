#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/time.hpp"

namespace artrec {

/// Closed set of healing-theme codes. Defaults to the ten-entry codebook;
/// a deployment may replace it from configuration.
class ThemeTaxonomy {
 public:
  ThemeTaxonomy();
  explicit ThemeTaxonomy(std::vector<std::string> themes);

  static const std::vector<std::string>& default_themes();

  bool contains(std::string_view theme) const;
  const std::vector<std::string>& themes() const noexcept { return themes_; }

 private:
  std::vector<std::string> themes_;
};

struct ThemeCode {
  std::string reflection_ref;
  std::string theme;
  std::string coder_id;
  Timestamp at;

  bool operator==(const ThemeCode&) const = default;
};

void to_json(nlohmann::json& j, const ThemeCode& code);
void from_json(const nlohmann::json& j, ThemeCode& code);

/// Manually assigned theme codes. A reflection may carry several.
class ThemeCodebook {
 public:
  explicit ThemeCodebook(ThemeTaxonomy taxonomy = {});

  /// Throws UnknownTheme.
  const ThemeCode& record_theme_code(std::string_view reflection_ref, std::string_view theme,
                                     std::string_view coder_id, Timestamp at = {});

  std::vector<ThemeCode> codes_for(std::string_view reflection_ref) const;
  const std::vector<ThemeCode>& codes() const noexcept { return codes_; }
  const ThemeTaxonomy& taxonomy() const noexcept { return taxonomy_; }

 private:
  ThemeTaxonomy taxonomy_;
  std::vector<ThemeCode> codes_;
};

}  // namespace artrec
