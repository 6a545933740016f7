#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "dialoscope/corpus.hpp"
#include "dialoscope/text.hpp"

namespace dialoscope {

struct TfidfOptions {
  std::size_t max_features = 10000;
  /// Terms present in more than this fraction of documents are excluded.
  double max_df = 0.9;
  /// Optional external token allow-list (e.g. a noun list); when set, only
  /// these tokens enter the vocabulary.
  std::optional<std::set<std::string>> allow_list;
};

/// Document-term matrix, one row per comment. tf = raw in-document count,
/// idf = ln((1 + n_docs) / (1 + df)) + 1, rows L2-normalized.
struct TfidfMatrix {
  std::vector<std::int64_t> comment_ids;  // row -> comment
  std::vector<std::string> terms;         // column -> term
  Eigen::SparseMatrix<double, Eigen::RowMajor> values;
};

/// Vocabulary = top max_features terms by total corpus count (ties broken
/// alphabetically) after stopword and max_df filtering. Throws Error(Data)
/// when the corpus is empty or no term survives.
TfidfMatrix build_tfidf(const Corpus& corpus, const StopwordSet& stopwords,
                        const TfidfOptions& options = {});

}  // namespace dialoscope
