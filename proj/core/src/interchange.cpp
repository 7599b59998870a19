#include "artrec/interchange.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "artrec/error.hpp"

namespace artrec {

namespace {

static_assert(std::numeric_limits<float>::is_iec559, "float32 must be IEEE-754 binary32");

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

EmbeddingHeader parse_header(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedHeader, e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::MalformedHeader, "header is not an object");

  auto field = [&](const char* key) -> const nlohmann::json& {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorCode::MalformedHeader, std::string("missing '") + key + "'");
    return *it;
  };

  EmbeddingHeader h;
  const auto& space = field("space");
  const auto& model = field("model");
  const auto& dim = field("dim");
  const auto& normalized = field("normalized");
  if (!space.is_string() || !model.is_string()) {
    throw Error(ErrorCode::MalformedHeader, "'space' and 'model' must be strings");
  }
  if (!dim.is_number_integer() || dim.get<std::int64_t>() <= 0) {
    throw Error(ErrorCode::MalformedHeader, "'dim' must be a positive integer");
  }
  if (!normalized.is_boolean()) throw Error(ErrorCode::MalformedHeader, "'normalized' must be a boolean");
  h.space = space.get<std::string>();
  h.model = model.get<std::string>();
  h.dim = dim.get<std::size_t>();
  h.normalized = normalized.get<bool>();
  return h;
}

void put_u16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

template <std::size_t N>
std::array<unsigned char, N> take(std::istream& in, const char* what) {
  std::array<unsigned char, N> b{};
  in.read(reinterpret_cast<char*>(b.data()), N);
  if (in.gcount() != static_cast<std::streamsize>(N)) {
    throw Error(ErrorCode::SchemaError, std::string("truncated binary embeddings reading ") + what);
  }
  return b;
}

std::uint16_t get_u16(std::istream& in, const char* what) {
  auto b = take<2>(in, what);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  auto b = take<4>(in, what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

std::string format_float(float value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite embedding component");
  }
  // JSON parsers read "-0" as the integer zero and drop the sign.
  if (value == 0.0f && std::signbit(value)) return "-0.0";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string text(buf.data(), res.ptr);
  // Readers parse through double; keep the short form only when that path is exact.
  if (static_cast<float>(std::strtod(text.c_str(), nullptr)) == value &&
      std::signbit(static_cast<float>(std::strtod(text.c_str(), nullptr))) == std::signbit(value)) {
    return text;
  }
  res = std::to_chars(buf.data(), buf.data() + buf.size(), static_cast<double>(value));
  return std::string(buf.data(), res.ptr);
}

RawEmbeddings read_embeddings_jsonl(std::istream& in) {
  RawEmbeddings out;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    if (!have_header) {
      out.header = parse_header(text);
      have_header = true;
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, at_line(line) + e.what());
    }
    auto id = obj.find("id");
    auto vec = obj.find("vec");
    if (!obj.is_object() || id == obj.end() || !id->is_string() || vec == obj.end() || !vec->is_array()) {
      throw Error(ErrorCode::SchemaError, at_line(line) + "expected {\"id\": string, \"vec\": [numbers]}");
    }
    EmbeddingRecord rec;
    rec.id = id->get<std::string>();
    if (vec->size() != out.header.dim) {
      throw Error(ErrorCode::DimensionMismatch, rec.id + ": got " + std::to_string(vec->size()) +
                                                    ", want " + std::to_string(out.header.dim));
    }
    rec.vec.reserve(vec->size());
    for (const auto& x : *vec) {
      if (!x.is_number()) throw Error(ErrorCode::SchemaError, at_line(line) + "non-numeric component");
      rec.vec.push_back(static_cast<float>(x.get<double>()));
    }
    out.records.push_back(std::move(rec));
  }
  if (!have_header) throw Error(ErrorCode::MalformedHeader, "empty embeddings file");
  return out;
}

void write_embeddings_jsonl(std::ostream& out, const RawEmbeddings& embeddings) {
  const auto& h = embeddings.header;
  out << nlohmann::json{{"space", h.space}, {"model", h.model}, {"dim", h.dim}, {"normalized", h.normalized}}
             .dump()
      << '\n';
  for (const auto& rec : embeddings.records) {
    if (rec.vec.size() != h.dim) {
      throw Error(ErrorCode::DimensionMismatch, rec.id + ": got " + std::to_string(rec.vec.size()) +
                                                    ", want " + std::to_string(h.dim));
    }
    out << "{\"id\":" << nlohmann::json(rec.id).dump() << ",\"vec\":[";
    for (std::size_t i = 0; i < rec.vec.size(); ++i) {
      if (i) out << ',';
      out << format_float(rec.vec[i]);
    }
    out << "]}\n";
  }
}

RawEmbeddings read_embeddings_binary(std::istream& in, EmbeddingHeader header) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kBinaryMagic, 4) != 0) {
    throw Error(ErrorCode::MalformedHeader, "missing VAEM magic");
  }
  const std::uint32_t version = get_u32(in, "version");
  if (version != kBinaryVersion) {
    throw Error(ErrorCode::MalformedHeader, "unsupported version " + std::to_string(version));
  }
  const std::uint32_t dim = get_u32(in, "dim");
  const std::uint32_t count = get_u32(in, "count");
  if (dim == 0) throw Error(ErrorCode::MalformedHeader, "dim must be positive");

  RawEmbeddings out;
  out.header = std::move(header);
  out.header.dim = dim;
  out.records.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    EmbeddingRecord rec;
    const std::uint16_t len = get_u16(in, "id length");
    rec.id.resize(len);
    in.read(rec.id.data(), len);
    if (in.gcount() != len) throw Error(ErrorCode::SchemaError, "truncated binary embeddings reading id");
    rec.vec.resize(dim);
    for (auto& x : rec.vec) x = std::bit_cast<float>(get_u32(in, "vector"));
    out.records.push_back(std::move(rec));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::SchemaError, "trailing bytes after " + std::to_string(count) + " records");
  }
  return out;
}

void write_embeddings_binary(std::ostream& out, const RawEmbeddings& embeddings) {
  const auto& h = embeddings.header;
  if (h.dim == 0 || h.dim > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::MalformedHeader, "dim out of range for binary form");
  }
  out.write(kBinaryMagic, 4);
  put_u32(out, kBinaryVersion);
  put_u32(out, static_cast<std::uint32_t>(h.dim));
  put_u32(out, static_cast<std::uint32_t>(embeddings.records.size()));
  for (const auto& rec : embeddings.records) {
    if (rec.id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorCode::SchemaError, "id too long for binary form: " + rec.id);
    }
    if (rec.vec.size() != h.dim) {
      throw Error(ErrorCode::DimensionMismatch, rec.id + ": got " + std::to_string(rec.vec.size()) +
                                                    ", want " + std::to_string(h.dim));
    }
    put_u16(out, static_cast<std::uint16_t>(rec.id.size()));
    out.write(rec.id.data(), static_cast<std::streamsize>(rec.id.size()));
    for (float x : rec.vec) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
}

EmbeddingFormat detect_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read embeddings '" + path.string() + "'");
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0 ? EmbeddingFormat::Binary
                                                                       : EmbeddingFormat::Jsonl;
}

RawEmbeddings read_embeddings(const std::filesystem::path& path, EmbeddingHeader binary_header) {
  const auto format = detect_format(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read embeddings '" + path.string() + "'");
  return format == EmbeddingFormat::Binary ? read_embeddings_binary(in, std::move(binary_header))
                                           : read_embeddings_jsonl(in);
}

void write_embeddings(const std::filesystem::path& path, const RawEmbeddings& embeddings,
                      EmbeddingFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  if (format == EmbeddingFormat::Binary) {
    write_embeddings_binary(out, embeddings);
  } else {
    write_embeddings_jsonl(out, embeddings);
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace artrec
