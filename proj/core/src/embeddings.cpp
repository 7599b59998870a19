#include "artrec/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include "artrec/catalog.hpp"
#include "artrec/error.hpp"

namespace artrec {

namespace {

void check_dims(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "got " + std::to_string(v.size()) + ", want " + std::to_string(u.size()));
  }
}

}  // namespace

double dot(std::span<const float> u, std::span<const float> v) {
  check_dims(u, v);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  }
  return acc;
}

double cosine(std::span<const float> u, std::span<const float> v) {
  check_dims(u, v);
  double uv = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    uv += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  // sqrt(uu) * sqrt(vv) keeps the expression symmetric under swapping u and v.
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

EmbeddingSpace::EmbeddingSpace(const Catalog& catalog, const RawEmbeddings& raw)
    : space_id_(raw.header.space), model_name_(raw.header.model), dim_(raw.header.dim) {
  if (dim_ == 0) throw Error(ErrorCode::MalformedHeader, "dim must be positive");
  ids_.reserve(raw.records.size());
  data_.reserve(raw.records.size() * dim_);
  for (const auto& rec : raw.records) {
    if (rec.vec.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, rec.id + ": got " + std::to_string(rec.vec.size()) +
                                                    ", want " + std::to_string(dim_));
    }
    if (!catalog.contains(rec.id)) throw Error(ErrorCode::UnknownPainting, rec.id);
    if (!index_.emplace(rec.id, ids_.size()).second) throw Error(ErrorCode::DuplicateId, rec.id);
    ids_.push_back(rec.id);

    double sq = 0.0;
    for (float x : rec.vec) {
      if (!std::isfinite(x)) throw Error(ErrorCode::SchemaError, rec.id + ": non-finite component");
      sq += static_cast<double>(x) * static_cast<double>(x);
    }
    if (sq == 0.0) {
      zero_ids_.push_back(rec.id);
      data_.insert(data_.end(), dim_, 0.0f);
      continue;
    }
    const double norm = std::sqrt(sq);
    for (float x : rec.vec) data_.push_back(static_cast<float>(static_cast<double>(x) / norm));
  }
}

bool EmbeddingSpace::contains(std::string_view id) const { return index_of(id).has_value(); }

std::optional<std::size_t> EmbeddingSpace::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingSpace::vector(std::size_t index) const {
  return {data_.data() + index * dim_, dim_};
}

std::span<const float> EmbeddingSpace::vector(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw Error(ErrorCode::UnknownPainting, std::string(id));
  return vector(*idx);
}

EmbeddingSpace ingest_embeddings(const Catalog& catalog, const std::filesystem::path& path,
                                 EmbeddingHeader binary_header) {
  return EmbeddingSpace(catalog, read_embeddings(path, std::move(binary_header)));
}

SimilarityRow similarity_row(const EmbeddingSpace& space, std::string_view seed_id) {
  auto seed = space.index_of(seed_id);
  if (!seed) throw Error(ErrorCode::UnknownPainting, std::string(seed_id));
  SimilarityRow row;
  row.seed_id = std::string(seed_id);
  row.scores.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    row.scores.push_back({space.ids()[i], space.similarity(*seed, i)});
  }
  return row;
}

SimilarityMatrix::SimilarityMatrix(const EmbeddingSpace& space, std::size_t max_size) : n_(space.size()) {
  if (n_ > max_size) {
    throw Error(ErrorCode::InvalidArgument, "space of " + std::to_string(n_) +
                                                " paintings exceeds the dense matrix limit of " +
                                                std::to_string(max_size));
  }
  values_.resize(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double s = space.similarity(i, j);
      values_[i * n_ + j] = s;
      values_[j * n_ + i] = s;
    }
  }
}

}  // namespace artrec
