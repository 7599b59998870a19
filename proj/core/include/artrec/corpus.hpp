#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "artrec/catalog.hpp"
#include "artrec/embeddings.hpp"

namespace artrec {

/// A catalog together with the embedding spaces bound to it. Shared read-only
/// by every session.
class Corpus {
 public:
  explicit Corpus(std::shared_ptr<const Catalog> catalog);

  /// Throws InvalidArgument when a space with the same id is already present.
  void add_space(std::shared_ptr<const EmbeddingSpace> space);

  const Catalog& catalog() const noexcept { return *catalog_; }

  /// Throws NotFound.
  const EmbeddingSpace& space(std::string_view space_id) const;
  bool has_space(std::string_view space_id) const;
  std::vector<std::string> space_ids() const;

 private:
  std::shared_ptr<const Catalog> catalog_;
  std::map<std::string, std::shared_ptr<const EmbeddingSpace>, std::less<>> spaces_;
};

}  // namespace artrec
