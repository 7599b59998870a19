#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "artrec/interchange.hpp"

namespace artrec {

class Catalog;

/// Cosine similarity u·v / (|u||v|), accumulated in double in ascending index
/// order. Swapping the arguments gives a bit-identical result. Returns 0.0 if
/// either vector has zero norm; the result is clamped to [-1, 1].
/// Throws DimensionMismatch when the lengths differ.
double cosine(std::span<const float> u, std::span<const float> v);

/// Dot product with the same reduction order as cosine().
double dot(std::span<const float> u, std::span<const float> v);

/// One backbone's latent vectors, L2-normalized once at ingestion so that
/// similarity is a dot product. Immutable once built.
class EmbeddingSpace {
 public:
  /// Validates every record against `catalog` and normalizes the vectors.
  /// Throws UnknownPainting, DimensionMismatch or DuplicateId. Zero vectors
  /// are kept as all-zeros and listed in zero_vectors().
  EmbeddingSpace(const Catalog& catalog, const RawEmbeddings& raw);

  const std::string& space_id() const noexcept { return space_id_; }
  const std::string& model_name() const noexcept { return model_name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool normalized() const noexcept { return true; }

  /// Ids in file order.
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<std::string>& zero_vectors() const noexcept { return zero_ids_; }

  bool contains(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

  /// Normalized vector of the painting at `index`.
  std::span<const float> vector(std::size_t index) const;

  /// Throws UnknownPainting.
  std::span<const float> vector(std::string_view id) const;

  /// Similarity between the paintings at two indices.
  double similarity(std::size_t a, std::size_t b) const { return dot(vector(a), vector(b)); }

 private:
  std::string space_id_;
  std::string model_name_;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::vector<std::string> zero_ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ScoredPainting {
  std::string painting_id;
  double score = 0.0;

  bool operator==(const ScoredPainting&) const = default;
};

/// One row of the similarity matrix, in space order, seed included.
struct SimilarityRow {
  std::string seed_id;
  std::vector<ScoredPainting> scores;
};

/// Reads `path` (either interchange form) and builds the space.
EmbeddingSpace ingest_embeddings(const Catalog& catalog, const std::filesystem::path& path,
                                 EmbeddingHeader binary_header = {});

/// Throws UnknownPainting when the seed is not in the space.
SimilarityRow similarity_row(const EmbeddingSpace& space, std::string_view seed_id);

/// Dense m×m similarity matrix. Refuses to materialize when m > max_size.
class SimilarityMatrix {
 public:
  static constexpr std::size_t kDefaultMaxSize = 4096;

  explicit SimilarityMatrix(const EmbeddingSpace& space, std::size_t max_size = kDefaultMaxSize);

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t row, std::size_t col) const { return values_[row * n_ + col]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

}  // namespace artrec
