#include <benchmark/benchmark.h>

#include <random>

#include "dialoscope/nmf.hpp"
#include "dialoscope/svd.hpp"

using namespace dialoscope;

namespace {

/// Sparse nonnegative matrix with roughly `density` nonzeros per row.
TfidfMatrix synthetic_matrix(int docs, int terms, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<Eigen::Triplet<double>> triplets;
  auto per_row = static_cast<int>(density * terms);
  for (int i = 0; i < docs; ++i) {
    for (int k = 0; k < per_row; ++k) {
      triplets.emplace_back(i, static_cast<int>(rng() % terms), unit(rng));
    }
  }
  TfidfMatrix matrix;
  matrix.values.resize(docs, terms);
  matrix.values.setFromTriplets(triplets.begin(), triplets.end());
  for (int i = 0; i < docs; ++i) matrix.comment_ids.push_back(i);
  for (int j = 0; j < terms; ++j) matrix.terms.push_back("t" + std::to_string(j));
  return matrix;
}

void BM_NndsvdInit(benchmark::State& state) {
  auto matrix = synthetic_matrix(static_cast<int>(state.range(0)), 2000, 0.02, 7);
  for (auto _ : state) {
    auto init = nndsvd_init(matrix.values, 10, 7);
    benchmark::DoNotOptimize(init.w0);
  }
}
BENCHMARK(BM_NndsvdInit)->Arg(500)->Arg(2000);

void BM_FitNmf(benchmark::State& state) {
  auto matrix = synthetic_matrix(static_cast<int>(state.range(0)), 2000, 0.02, 7);
  NmfConfig config;
  config.n_topics = static_cast<int>(state.range(1));
  config.max_iter = 50;
  for (auto _ : state) {
    TopicModel model = fit_nmf(matrix, config);
    benchmark::DoNotOptimize(model.w);
  }
}
BENCHMARK(BM_FitNmf)->Args({500, 5})->Args({500, 20})->Args({2000, 10});

void BM_HalsSweepObjective(benchmark::State& state) {
  auto matrix = synthetic_matrix(2000, 2000, 0.02, 7);
  auto init = nndsvd_init(matrix.values, 10, 7);
  for (auto _ : state) {
    double obj = nmf_objective(matrix.values, init.w0, init.h0, 0.1, 0.5);
    benchmark::DoNotOptimize(obj);
  }
}
BENCHMARK(BM_HalsSweepObjective);

}  // namespace

BENCHMARK_MAIN();
