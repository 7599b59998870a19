#pragma once

// Test helpers: fixture paths, synthetic data and reference implementations
// ("oracles") that the production code is checked against. The oracles are
// deliberately naive: long double arithmetic on raw vectors, full sorts, no
// shared code with the library beyond plain data types.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "artrec/catalog.hpp"
#include "artrec/corpus.hpp"
#include "artrec/embeddings.hpp"
#include "artrec/interchange.hpp"

#ifndef ARTREC_FIXTURE_DIR
#error "ARTREC_FIXTURE_DIR must be defined"
#endif

namespace testkit {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ARTREC_FIXTURE_DIR) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("artrec-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string numbered_id(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04zu", prefix.c_str(), i);
  return buf;
}

inline artrec::Catalog make_catalog(const std::vector<std::string>& ids) {
  std::vector<artrec::Painting> paintings;
  for (const auto& id : ids) {
    paintings.push_back({id, "Title " + id, "Artist", "https://example.org/img/" + id + ".jpg", "CC0", {}});
  }
  return artrec::Catalog(std::move(paintings), "synthetic");
}

// Gaussian vectors with a fixed seed. The caller may overwrite entries to
// plant ties or zero vectors.
inline artrec::RawEmbeddings random_embeddings(const std::vector<std::string>& ids, std::size_t dim,
                                               unsigned seed, const std::string& space = "visual") {
  std::mt19937 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  artrec::RawEmbeddings raw;
  raw.header = {space, "synthetic", dim, false};
  for (const auto& id : ids) {
    artrec::EmbeddingRecord rec{id, std::vector<float>(dim)};
    for (auto& x : rec.vec) x = gauss(rng);
    raw.records.push_back(std::move(rec));
  }
  return raw;
}

inline std::vector<std::string> make_ids(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= n; ++i) ids.push_back(numbered_id(prefix, i));
  return ids;
}

// --- oracles ---------------------------------------------------------------

inline long double oracle_cosine(const std::vector<float>& u, const std::vector<float>& v) {
  long double uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<long double>(u[i]) * v[i];
    uu += static_cast<long double>(u[i]) * u[i];
    vv += static_cast<long double>(v[i]) * v[i];
  }
  if (uu == 0 || vv == 0) return 0;
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

struct OracleEntry {
  std::string id;
  long double score;
};

// Scores every candidate, sorts the whole list, then truncates.
inline std::vector<OracleEntry> oracle_top_r(const artrec::RawEmbeddings& raw, const std::string& seed,
                                             std::size_t r, const std::set<std::string>& excluded = {}) {
  const std::vector<float>* seed_vec = nullptr;
  for (const auto& rec : raw.records) {
    if (rec.id == seed) seed_vec = &rec.vec;
  }
  std::vector<OracleEntry> all;
  for (const auto& rec : raw.records) {
    if (rec.id == seed || excluded.count(rec.id)) continue;
    all.push_back({rec.id, oracle_cosine(*seed_vec, rec.vec)});
  }
  std::sort(all.begin(), all.end(), [](const OracleEntry& a, const OracleEntry& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
  if (all.size() > r) all.resize(r);
  return all;
}

inline long double oracle_mean(const std::vector<double>& xs) {
  long double s = 0;
  for (double x : xs) s += x;
  return s / xs.size();
}

inline long double oracle_population_sd(const std::vector<double>& xs) {
  const long double m = oracle_mean(xs);
  long double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / xs.size());
}

inline double oracle_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace testkit
