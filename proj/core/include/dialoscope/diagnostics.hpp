#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dialoscope/embedding.hpp"

namespace dialoscope {

/// Per-dimension count of vocabulary vectors whose largest-magnitude
/// component lies in that dimension.
struct AnisotropyProfile {
  std::vector<std::size_t> argmax_counts;
  int dim = 0;
  std::size_t vocab_size = 0;
};

AnisotropyProfile anisotropy_profile(const EmbeddingTable& table);

struct PrefixPoint {
  std::size_t n;      // prefix length (in representable tokens)
  double raw_max;     // extremes of the n-th word vector
  double raw_min;
  double mean_max;    // extremes of the mean of the first n vectors
  double mean_min;
};

struct PrefixTrace {
  std::vector<PrefixPoint> points;
  std::size_t tokens_used = 0;
  std::size_t tokens_skipped = 0;  // out-of-vocabulary, logged by the caller
};

/// Running prefix-mean diagnostics over a token stream. Out-of-vocabulary
/// tokens are skipped; sample points beyond the stream end are dropped.
PrefixTrace prefix_trace(const EmbeddingTable& table, std::span<const std::string> tokens,
                         std::span<const std::size_t> sample_points);

struct ConvergencePoint {
  std::size_t n;
  std::optional<double> cosine;  // missing when a prefix mean has zero norm
};

/// Cosine similarity between the prefix means of two streams at each n.
std::vector<ConvergencePoint> cross_corpus_convergence(const EmbeddingTable& table,
                                                       std::span<const std::string> tokens_a,
                                                       std::span<const std::string> tokens_b,
                                                       std::span<const std::size_t> sample_points);

/// Log-spaced grid {1, 2, 5, 10, 20, 50, ...} up to max_n (inclusive).
std::vector<std::size_t> default_sample_points(std::size_t max_n);

/// `dim,count`.
void write_anisotropy_profile(const std::filesystem::path& path, const AnisotropyProfile& profile);
/// `n,max_raw,min_raw,max_mean,min_mean`.
void write_prefix_trace(const std::filesystem::path& path, const PrefixTrace& trace);
/// `n,cosine` (empty cosine for missing entries).
void write_convergence(const std::filesystem::path& path,
                       const std::vector<ConvergencePoint>& points);

}  // namespace dialoscope
