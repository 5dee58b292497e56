// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "epu/dedup.hpp"
#include "epu/scoring.hpp"

namespace {

struct ScoringData {
  epu::EmbeddingTable table{100};
  epu::ConceptVectors concepts;
  std::vector<epu::Document> docs;

  ScoringData() {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    const int vocab = 50000;
    std::vector<double> v(100);
    for (int w = 0; w < vocab; ++w) {
      for (auto& x : v) x = n(rng);
      table.add("w" + std::to_string(w), v);
    }
    concepts = epu::make_concepts(table, {"w0", "w1", "w2"});
    docs.resize(20000);
    for (auto& d : docs)
      for (int k = 0; k < 50; ++k) d.tokens.push_back("w" + std::to_string(rng() % vocab));
  }
};

const ScoringData& scoring_data() {
  static const ScoringData data;
  return data;
}

std::vector<epu::Document> dedup_docs() {
  std::mt19937_64 rng(2);
  std::vector<epu::Document> docs(5000);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    docs[i].id = std::to_string(i);
    for (int k = 0; k < 100; ++k) docs[i].tokens.push_back("t" + std::to_string(rng() % 20000));
  }
  return docs;
}

const std::vector<epu::Document>& dedup_data() {
  static const auto docs = dedup_docs();
  return docs;
}

void BM_ScoreSerial(benchmark::State& state) {
  const auto& d = scoring_data();
  for (auto _ : state) benchmark::DoNotOptimize(epu::score_documents_serial(d.docs, d.concepts, d.table, 0.3));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.docs.size()));
}

void BM_ScoreParallel(benchmark::State& state) {
  const auto& d = scoring_data();
  epu::ConceptSimilarityIndex index(d.table, d.concepts);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(epu::score_documents(d.docs, index, 0.3, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.docs.size()));
}

void BM_SignaturesSerial(benchmark::State& state) {
  const auto& docs = dedup_data();
  epu::DedupConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(epu::signatures_serial(docs, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

void BM_SignaturesParallel(benchmark::State& state) {
  const auto& docs = dedup_data();
  epu::DedupConfig cfg;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(epu::signatures(docs, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

}  // namespace

BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SignaturesSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SignaturesParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
