#include <benchmark/benchmark.h>

#include <random>

#include "dialoscope/embedding.hpp"

using namespace dialoscope;

namespace {

EmbeddingTable synthetic_table(int terms, int dim) {
  std::mt19937_64 rng(11);
  std::normal_distribution<float> gauss(0.f, 1.f);
  EmbeddingTable table(0, "bench");
  std::vector<float> v(static_cast<std::size_t>(dim));
  for (int i = 0; i < terms; ++i) {
    for (auto& x : v) x = gauss(rng);
    table.add("term" + std::to_string(i), v);
  }
  return table;
}

void BM_NeighborScan(benchmark::State& state) {
  auto table = synthetic_table(static_cast<int>(state.range(0)), 300);
  for (auto _ : state) {
    auto hits = neighbors(table, "term17", 0.2, 1000);
    benchmark::DoNotOptimize(hits);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NeighborScan)->Arg(10000)->Arg(50000);

void BM_EmbedText(benchmark::State& state) {
  auto table = synthetic_table(5000, 300);
  std::mt19937_64 rng(12);
  std::string text;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    text += "term" + std::to_string(rng() % 5000);
    text.push_back(' ');
  }
  StopwordSet none = StopwordSet::none();
  for (auto _ : state) {
    DocVector doc = embed_text(table, text, none, 512);
    benchmark::DoNotOptimize(doc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmbedText)->Arg(50)->Arg(1000);

void BM_Cosine300(benchmark::State& state) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  std::vector<double> a(300), b(300);
  for (auto& x : a) x = gauss(rng);
  for (auto& x : b) x = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cosine(a, b));
  }
}
BENCHMARK(BM_Cosine300);

}  // namespace

BENCHMARK_MAIN();
