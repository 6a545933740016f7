#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dialoscope/tfidf.hpp"

namespace dialoscope {

struct NmfConfig {
  int n_topics = 10;
  double alpha = 0.1;
  double l1_ratio = 0.5;
  double tol = 1e-4;
  int max_iter = 500;
  std::size_t max_features = 10000;
  double max_df = 0.9;
  double membership_threshold = 0.1;
  std::uint64_t seed = 0;
  int n_keywords = 10;
  int top_comments = 10;
};

/// NNDSVD initial factors built from the leading singular triplets: the
/// nonnegative section of each (u, v) pair with the larger norm product,
/// scaled by sqrt(sigma * norms). Deterministic for a given seed (the seed
/// drives the truncated-SVD sketch).
struct NndsvdResult {
  Eigen::MatrixXd w0;  // docs x topics
  Eigen::MatrixXd h0;  // topics x terms
  /// Number of factors actually carried by the data; factors beyond it are
  /// zero (input rank below n_topics).
  int effective_rank = 0;
};

NndsvdResult nndsvd_init(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                         int n_topics, std::uint64_t seed);

struct TopicModel {
  Eigen::MatrixXd w;  // documents x topics
  Eigen::MatrixXd h;  // topics x terms
  /// Objective after initialization and after each sweep; non-increasing.
  std::vector<double> objective_trace;
  std::vector<std::vector<std::string>> keywords;  // per topic, n_keywords terms
  NmfConfig config;
  std::vector<std::string> terms;
  std::vector<std::int64_t> comment_ids;
  int sweeps = 0;
  bool converged = false;
};

/// Minimize 1/2 ||X - WH||_F^2 + alpha*l1_ratio*(|W|_1 + |H|_1)
///          + 1/2*alpha*(1 - l1_ratio)*(||W||_F^2 + ||H||_F^2)
/// by cyclic HALS updates of H rows and W columns from an NNDSVD start.
/// Stops when the relative objective decrease falls below tol or after
/// max_iter sweeps. Single-threaded and bitwise reproducible for a given
/// seed.
TopicModel fit_nmf(const TfidfMatrix& matrix, const NmfConfig& config);

/// 1/2||X - WH||^2_F + regularization, as minimized by fit_nmf.
double nmf_objective(const Eigen::SparseMatrix<double, Eigen::RowMajor>& x,
                     const Eigen::MatrixXd& w, const Eigen::MatrixXd& h, double alpha,
                     double l1_ratio);

struct TopicAssignment {
  std::int64_t comment_id = 0;
  std::vector<int> topics;            // topics whose proportion >= threshold
  std::vector<double> proportions;    // per topic, W row normalized to sum 1
};

/// Per document: W row normalized to proportions (zero rows yield no
/// assignment); a topic is assigned iff its proportion >= threshold.
std::vector<TopicAssignment> assign_topics(const TopicModel& model, double membership_threshold);

/// Documents ranked by normalized proportion for `topic` (ties by raw W
/// value, then comment id), truncated to top_n.
std::vector<std::int64_t> representative_comments(const TopicModel& model, int topic,
                                                  std::size_t top_n);

/// Per topic, top-k terms by H weight (descending, ties by term order).
std::vector<std::vector<std::string>> topic_keywords(const Eigen::MatrixXd& h,
                                                     const std::vector<std::string>& terms, int k);

/// Per-topic report CSV `topic_id,rank,keyword,weight`.
void write_topic_keywords(const std::filesystem::path& path, const TopicModel& model);
/// `topic_id,rank,comment_id,proportion`.
void write_representative_comments(const std::filesystem::path& path, const TopicModel& model,
                                   std::size_t top_n);
/// Plain numeric column, one objective value per line.
void write_objective_trace(const std::filesystem::path& path, const TopicModel& model);

}  // namespace dialoscope
