#include "artrec/corpus.hpp"

#include "artrec/error.hpp"

namespace artrec {

Corpus::Corpus(std::shared_ptr<const Catalog> catalog) : catalog_(std::move(catalog)) {
  if (!catalog_) throw Error(ErrorCode::InvalidArgument, "corpus requires a catalog");
}

void Corpus::add_space(std::shared_ptr<const EmbeddingSpace> space) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "null embedding space");
  const std::string id = space->space_id();
  if (!spaces_.emplace(id, std::move(space)).second) {
    throw Error(ErrorCode::InvalidArgument, "duplicate embedding space '" + id + "'");
  }
}

const EmbeddingSpace& Corpus::space(std::string_view space_id) const {
  auto it = spaces_.find(space_id);
  if (it == spaces_.end()) throw Error(ErrorCode::NotFound, "embedding space '" + std::string(space_id) + "'");
  return *it->second;
}

bool Corpus::has_space(std::string_view space_id) const { return spaces_.find(space_id) != spaces_.end(); }

std::vector<std::string> Corpus::space_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : spaces_) ids.push_back(id);
  return ids;
}

}  // namespace artrec
