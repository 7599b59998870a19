#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artrec/embeddings.hpp"
#include "artrec/time.hpp"

namespace artrec {

inline constexpr std::size_t kDefaultListLength = 200;

/// Ranked candidates for one seed: score descending, ties by id ascending.
/// Never contains the seed or an excluded id.
struct RecommendationList {
  std::string seed_id;
  std::string space_id;
  std::vector<ScoredPainting> entries;
  std::size_t r = kDefaultListLength;
  std::set<std::string> excluded;
  Timestamp generated_at;

  bool contains(std::string_view painting_id) const;
  bool operator==(const RecommendationList&) const = default;
};

void to_json(nlohmann::json& j, const RecommendationList& list);
void from_json(const nlohmann::json& j, RecommendationList& list);

/// Orders a before b in a recommendation list.
inline bool ranks_before(const ScoredPainting& a, const ScoredPainting& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.painting_id < b.painting_id;
}

/// User score of every painting in the space against the seed, seed included.
/// Throws UnknownPainting.
std::map<std::string, double> score_user(const EmbeddingSpace& space, std::string_view seed_id);

/// Top-r list by partial selection. Throws UnknownPainting, or
/// InvalidArgument when r == 0.
RecommendationList top_r(const EmbeddingSpace& space, std::string_view seed_id, std::size_t r,
                         const std::set<std::string>& excluded = {}, Timestamp generated_at = {});

/// top_r with the enlarged exclusion set; excluded ids never reappear.
RecommendationList regenerate(const EmbeddingSpace& space, std::string_view seed_id, std::size_t r,
                              const std::set<std::string>& excluded, Timestamp generated_at = {});

}  // namespace artrec
