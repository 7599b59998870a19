#include "artrec/recsys.hpp"

#include <algorithm>

#include "artrec/error.hpp"

namespace artrec {

bool RecommendationList::contains(std::string_view painting_id) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const ScoredPainting& e) { return e.painting_id == painting_id; });
}

void to_json(nlohmann::json& j, const RecommendationList& list) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : list.entries) {
    entries.push_back({{"painting_id", e.painting_id}, {"score", e.score}});
  }
  j = nlohmann::json{{"seed_id", list.seed_id},
                     {"space_id", list.space_id},
                     {"r", list.r},
                     {"excluded", list.excluded},
                     {"generated_at", list.generated_at.ms},
                     {"entries", std::move(entries)}};
}

void from_json(const nlohmann::json& j, RecommendationList& list) {
  list.seed_id = j.at("seed_id").get<std::string>();
  list.space_id = j.at("space_id").get<std::string>();
  list.r = j.at("r").get<std::size_t>();
  list.excluded = j.at("excluded").get<std::set<std::string>>();
  list.generated_at = {j.at("generated_at").get<std::int64_t>()};
  list.entries.clear();
  for (const auto& e : j.at("entries")) {
    list.entries.push_back({e.at("painting_id").get<std::string>(), e.at("score").get<double>()});
  }
}

std::map<std::string, double> score_user(const EmbeddingSpace& space, std::string_view seed_id) {
  std::map<std::string, double> scores;
  for (auto& s : similarity_row(space, seed_id).scores) scores.emplace(std::move(s.painting_id), s.score);
  return scores;
}

RecommendationList top_r(const EmbeddingSpace& space, std::string_view seed_id, std::size_t r,
                         const std::set<std::string>& excluded, Timestamp generated_at) {
  if (r == 0) throw Error(ErrorCode::InvalidArgument, "r must be at least 1");
  auto seed = space.index_of(seed_id);
  if (!seed) throw Error(ErrorCode::UnknownPainting, std::string(seed_id));

  std::vector<ScoredPainting> candidates;
  candidates.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i == *seed) continue;
    const std::string& id = space.ids()[i];
    if (excluded.contains(id)) continue;
    candidates.push_back({id, space.similarity(*seed, i)});
  }

  const std::size_t keep = std::min(r, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), ranks_before);
  candidates.resize(keep);

  RecommendationList list;
  list.seed_id = std::string(seed_id);
  list.space_id = space.space_id();
  list.entries = std::move(candidates);
  list.r = r;
  list.excluded = excluded;
  list.generated_at = generated_at;
  return list;
}

RecommendationList regenerate(const EmbeddingSpace& space, std::string_view seed_id, std::size_t r,
                              const std::set<std::string>& excluded, Timestamp generated_at) {
  return top_r(space, seed_id, r, excluded, generated_at);
}

}  // namespace artrec
