#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace artrec {

/// Header line of the text interchange format.
struct EmbeddingHeader {
  std::string space;
  std::string model;
  std::size_t dim = 0;
  bool normalized = false;

  bool operator==(const EmbeddingHeader&) const = default;
};

struct EmbeddingRecord {
  std::string id;
  std::vector<float> vec;

  bool operator==(const EmbeddingRecord&) const = default;
};

/// Embeddings exactly as they appear on disk, before validation against a
/// catalog or normalization.
struct RawEmbeddings {
  EmbeddingHeader header;
  std::vector<EmbeddingRecord> records;
};

enum class EmbeddingFormat { Jsonl, Binary };

inline constexpr char kBinaryMagic[4] = {'V', 'A', 'E', 'M'};
inline constexpr std::uint32_t kBinaryVersion = 1;

// Text form: line 1 {"space","model","dim","normalized"}, then one
// {"id","vec"} object per line. Floats are written so that reading them back
// reproduces every float32 bit-exactly.
RawEmbeddings read_embeddings_jsonl(std::istream& in);
void write_embeddings_jsonl(std::ostream& out, const RawEmbeddings& embeddings);

// Binary form: "VAEM", u32 version, u32 dim, u32 count, then per record
// u16 id length, id bytes, dim float32. All integers and floats little-endian.
// The binary form has no space/model/normalized fields; `header` supplies them
// on read.
RawEmbeddings read_embeddings_binary(std::istream& in, EmbeddingHeader header = {});
void write_embeddings_binary(std::ostream& out, const RawEmbeddings& embeddings);

/// Sniffs the first four bytes for the binary magic.
EmbeddingFormat detect_format(const std::filesystem::path& path);

RawEmbeddings read_embeddings(const std::filesystem::path& path, EmbeddingHeader binary_header = {});
void write_embeddings(const std::filesystem::path& path, const RawEmbeddings& embeddings,
                      EmbeddingFormat format);

/// Shortest decimal text that reads back as exactly `value`.
std::string format_float(float value);

}  // namespace artrec
