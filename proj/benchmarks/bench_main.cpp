#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "artrec/catalog.hpp"
#include "artrec/embeddings.hpp"
#include "artrec/interchange.hpp"
#include "artrec/recsys.hpp"

namespace {

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("p-" + std::to_string(i));
  return out;
}

artrec::Catalog catalog(const std::vector<std::string>& ids) {
  std::vector<artrec::Painting> paintings;
  for (const auto& id : ids) {
    artrec::Painting p;
    p.id = id;
    p.title = id;
    p.image_uri = "img/" + id + ".jpg";
    paintings.push_back(std::move(p));
  }
  return artrec::Catalog(std::move(paintings), "bench");
}

artrec::RawEmbeddings embeddings(const std::vector<std::string>& ids, std::size_t dim) {
  std::mt19937 rng(7);
  std::normal_distribution<float> gauss;
  artrec::RawEmbeddings raw;
  raw.header = {"visual", "bench", dim, false};
  for (const auto& id : ids) {
    std::vector<float> v(dim);
    for (auto& x : v) x = gauss(rng);
    raw.records.push_back({id, std::move(v)});
  }
  return raw;
}

void BM_Cosine(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto raw = embeddings(ids(2), dim);
  for (auto _ : state) benchmark::DoNotOptimize(artrec::cosine(raw.records[0].vec, raw.records[1].vec));
}
BENCHMARK(BM_Cosine)->Arg(16)->Arg(512)->Arg(768);

void BM_TopR(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto names = ids(m);
  const auto cat = catalog(names);
  const artrec::EmbeddingSpace space(cat, embeddings(names, 512));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(artrec::top_r(space, names[i++ % m], 200));
  state.SetComplexityN(static_cast<std::int64_t>(m));
}
BENCHMARK(BM_TopR)->Arg(300)->Arg(3000)->Arg(20000)->Complexity();

void BM_IngestJsonl(benchmark::State& state) {
  const auto names = ids(static_cast<std::size_t>(state.range(0)));
  const auto cat = catalog(names);
  std::ostringstream text;
  artrec::write_embeddings_jsonl(text, embeddings(names, 512));
  const std::string doc = text.str();
  for (auto _ : state) {
    std::istringstream in(doc);
    benchmark::DoNotOptimize(artrec::EmbeddingSpace(cat, artrec::read_embeddings_jsonl(in)));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}
BENCHMARK(BM_IngestJsonl)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_IngestBinary(benchmark::State& state) {
  const auto names = ids(static_cast<std::size_t>(state.range(0)));
  const auto cat = catalog(names);
  const auto raw = embeddings(names, 512);
  std::ostringstream bin;
  artrec::write_embeddings_binary(bin, raw);
  const std::string doc = bin.str();
  for (auto _ : state) {
    std::istringstream in(doc);
    benchmark::DoNotOptimize(artrec::EmbeddingSpace(cat, artrec::read_embeddings_binary(in, raw.header)));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
}
BENCHMARK(BM_IngestBinary)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
