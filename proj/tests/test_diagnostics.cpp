#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "dialoscope/diagnostics.hpp"
#include "dialoscope/errors.hpp"
#include "support/helpers.hpp"

using namespace dialoscope;

TEST_CASE("anisotropy: one-hot vectors all land in their dimension") {
  EmbeddingTable table(0, "onehot");
  for (int i = 0; i < 12; ++i) {
    std::vector<float> v(8, 0.f);
    v[0] = i % 2 ? 1.f : -1.f;  // magnitude decides, sign does not
    table.add(testsupport::word(i), v);
  }
  auto profile = anisotropy_profile(table);
  CHECK(profile.dim == 8);
  CHECK(profile.vocab_size == 12);
  CHECK(profile.argmax_counts[0] == 12);
  for (int d = 1; d < 8; ++d) CHECK(profile.argmax_counts[static_cast<std::size_t>(d)] == 0);
}

// [DERIVED: binomial-bound oracle] for an isotropic Gaussian table each
// dimension wins with p = 1/dim; the max bin stays within 3 sigma of n/dim.
TEST_CASE("anisotropy of an isotropic Gaussian table is near-uniform") {
  std::mt19937_64 rng(81);
  const int dim = 25;
  const int n = 10000;
  EmbeddingTable table = testsupport::random_table(rng, n, dim);
  auto profile = anisotropy_profile(table);

  std::size_t total = std::accumulate(profile.argmax_counts.begin(),
                                      profile.argmax_counts.end(), std::size_t{0});
  CHECK(total == static_cast<std::size_t>(n));  // counts sum to vocab size

  const double expected = static_cast<double>(n) / dim;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / dim));
  for (int d = 0; d < dim; ++d) {
    CAPTURE(d);
    CHECK(std::abs(static_cast<double>(profile.argmax_counts[static_cast<std::size_t>(d)]) -
                   expected) <= 3.0 * sigma);
  }
}

TEST_CASE("anisotropy is invariant under vocabulary reordering") {
  std::mt19937_64 rng(82);
  EmbeddingTable table = testsupport::random_table(rng, 500, 10);
  EmbeddingTable reversed(0, "reversed");
  for (std::size_t row = table.size(); row-- > 0;) {
    auto v = table.vector(row);
    reversed.add(table.term(row), v);
  }
  auto a = anisotropy_profile(table);
  auto b = anisotropy_profile(reversed);
  CHECK(a.argmax_counts == b.argmax_counts);
}

TEST_CASE("prefix trace: constant stream is flat; n=1 equals the raw word") {
  EmbeddingTable table(0, "toy");
  table.add("only", std::vector<float>{0.5f, -1.5f, 2.0f});
  table.add("other", std::vector<float>{1.f, 1.f, 1.f});

  std::vector<std::string> stream(50, "only");
  std::vector<std::size_t> points = {1, 2, 5, 10, 50};
  auto trace = prefix_trace(table, stream, points);
  REQUIRE(trace.points.size() == 5);
  for (const auto& p : trace.points) {
    CHECK(p.raw_max == doctest::Approx(2.0));
    CHECK(p.raw_min == doctest::Approx(-1.5));
    CHECK(p.mean_max == doctest::Approx(2.0));
    CHECK(p.mean_min == doctest::Approx(-1.5));
  }
  CHECK(trace.points[0].n == 1);

  // out-of-vocabulary tokens are skipped and counted
  std::vector<std::string> with_oov = {"only", "zzz", "only", "qqq"};
  auto skipped = prefix_trace(table, with_oov, points);
  CHECK(skipped.tokens_used == 2);
  CHECK(skipped.tokens_skipped == 2);

  std::vector<std::string> all_oov = {"zzz", "qqq"};
  CHECK_THROWS_AS(prefix_trace(table, all_oov, points), Error);
}

// [DERIVED: from-scratch recomputation oracle]
TEST_CASE("incremental prefix means equal recomputation from scratch") {
  std::mt19937_64 rng(83);
  EmbeddingTable table = testsupport::random_table(rng, 40, 6);
  std::vector<std::string> stream;
  for (int i = 0; i < 500; ++i) stream.push_back(testsupport::word(static_cast<int>(rng() % 40)));

  std::vector<std::size_t> points = {1, 3, 10, 100, 500};
  auto trace = prefix_trace(table, stream, points);
  REQUIRE(trace.points.size() == 5);

  for (const auto& point : trace.points) {
    std::vector<double> mean(6, 0.0);
    for (std::size_t i = 0; i < point.n; ++i) {
      auto v = table.vector(*table.find(stream[i]));
      for (std::size_t k = 0; k < 6; ++k) mean[k] += v[k];
    }
    for (auto& x : mean) x /= static_cast<double>(point.n);
    CHECK(point.mean_max ==
          doctest::Approx(*std::max_element(mean.begin(), mean.end())).epsilon(1e-10));
    CHECK(point.mean_min ==
          doctest::Approx(*std::min_element(mean.begin(), mean.end())).epsilon(1e-10));
    auto raw = table.vector(*table.find(stream[point.n - 1]));
    CHECK(point.raw_max ==
          doctest::Approx(*std::max_element(raw.begin(), raw.end())).epsilon(1e-10));
  }
}

TEST_CASE("cross-corpus convergence of identical streams is exactly 1") {
  std::mt19937_64 rng(84);
  EmbeddingTable table = testsupport::random_table(rng, 30, 5);
  std::vector<std::string> stream;
  for (int i = 0; i < 200; ++i) stream.push_back(testsupport::word(static_cast<int>(rng() % 30)));
  std::vector<std::size_t> points = {1, 10, 100, 200};
  auto curve = cross_corpus_convergence(table, stream, stream, points);
  REQUIRE(curve.size() == 4);
  for (const auto& p : curve) {
    REQUIRE(p.cosine.has_value());
    CHECK(*p.cosine == doctest::Approx(1.0).epsilon(1e-12));
  }
}

// [DERIVED: naive recomputation oracle]
TEST_CASE("convergence curve matches naive recomputation at every point") {
  std::mt19937_64 rng(85);
  EmbeddingTable table = testsupport::random_table(rng, 50, 7);
  std::vector<std::string> a, b;
  for (int i = 0; i < 300; ++i) {
    a.push_back(testsupport::word(static_cast<int>(rng() % 50)));
    b.push_back(testsupport::word(static_cast<int>(rng() % 50)));
  }
  std::vector<std::size_t> points = {2, 5, 20, 300};
  auto curve = cross_corpus_convergence(table, a, b, points);
  REQUIRE(curve.size() == 4);

  auto naive_mean = [&](const std::vector<std::string>& stream, std::size_t n) {
    std::vector<double> mean(7, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = table.vector(*table.find(stream[i]));
      for (std::size_t k = 0; k < 7; ++k) mean[k] += v[k];
    }
    for (auto& x : mean) x /= static_cast<double>(n);
    return mean;
  };
  for (const auto& point : curve) {
    auto ma = naive_mean(a, point.n);
    auto mb = naive_mean(b, point.n);
    double dot = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < 7; ++k) {
      dot += ma[k] * mb[k];
      na += ma[k] * ma[k];
      nb += mb[k] * mb[k];
    }
    REQUIRE(point.cosine.has_value());
    CHECK(*point.cosine == doctest::Approx(dot / std::sqrt(na * nb)).epsilon(1e-10));
  }
}

TEST_CASE("zero-norm prefix means are emitted as missing entries") {
  EmbeddingTable table(0, "cancel");
  table.add("plus", std::vector<float>{1.f, 0.f});
  table.add("minus", std::vector<float>{-1.f, 0.f});
  table.add("up", std::vector<float>{0.f, 1.f});
  std::vector<std::string> a = {"plus", "minus"};  // mean at n=2 is the zero vector
  std::vector<std::string> b = {"up", "up"};
  std::vector<std::size_t> points = {1, 2};
  auto curve = cross_corpus_convergence(table, a, b, points);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].cosine.has_value());
  CHECK_FALSE(curve[1].cosine.has_value());
}

// median cross-corpus cosine over seeded trials rises with n (the weaker,
// checkable form of convergence-in-expectation on random streams)
TEST_CASE("cross-corpus cosine rises from n=100 to n=2000 on anisotropic tables") {
  // anisotropic table: a shared mean direction plus isotropic noise
  std::mt19937_64 rng(86);
  std::normal_distribution<float> gauss(0.f, 1.f);
  EmbeddingTable table(0, "aniso");
  const int dim = 20;
  for (int i = 0; i < 400; ++i) {
    std::vector<float> v(dim);
    for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] = gauss(rng);
    v[0] += 1.2f;  // common bias direction
    table.add(testsupport::word(i), v);
  }

  std::vector<double> early, late;
  for (int trial = 0; trial < 20; ++trial) {
    std::mt19937_64 trial_rng(1000 + static_cast<std::uint64_t>(trial));
    std::vector<std::string> a, b;
    for (int i = 0; i < 2000; ++i) {
      a.push_back(testsupport::word(static_cast<int>(trial_rng() % 400)));
      b.push_back(testsupport::word(static_cast<int>(trial_rng() % 400)));
    }
    std::vector<std::size_t> points = {100, 2000};
    auto curve = cross_corpus_convergence(table, a, b, points);
    REQUIRE(curve.size() == 2);
    early.push_back(*curve[0].cosine);
    late.push_back(*curve[1].cosine);
  }
  std::sort(early.begin(), early.end());
  std::sort(late.begin(), late.end());
  CHECK(late[10] > early[10]);  // medians
}

TEST_CASE("default sample points form the 1-2-5 grid") {
  CHECK(default_sample_points(5000) ==
        std::vector<std::size_t>{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000});
  CHECK(default_sample_points(3) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("diagnostic CSV writers emit the documented headers") {
  testsupport::TempDir dir("diagcsv");
  EmbeddingTable table(0, "toy");
  table.add("a", std::vector<float>{1.f, 0.f});
  auto profile = anisotropy_profile(table);
  write_anisotropy_profile(dir.file("anisotropy.csv"), profile);

  std::vector<std::string> stream = {"a", "a"};
  std::vector<std::size_t> points = {1, 2};
  write_prefix_trace(dir.file("trace.csv"), prefix_trace(table, stream, points));
  write_convergence(dir.file("conv.csv"),
                    cross_corpus_convergence(table, stream, stream, points));

  std::ifstream aniso(dir.file("anisotropy.csv"));
  std::string line;
  std::getline(aniso, line);
  CHECK(line == "dim,count");
  std::ifstream trace(dir.file("trace.csv"));
  std::getline(trace, line);
  CHECK(line == "n,max_raw,min_raw,max_mean,min_mean");
  std::ifstream conv(dir.file("conv.csv"));
  std::getline(conv, line);
  CHECK(line == "n,cosine");
}
