#include "dialoscope/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "dialoscope/errors.hpp"

namespace dialoscope {

TfidfMatrix build_tfidf(const Corpus& corpus, const StopwordSet& stopwords,
                        const TfidfOptions& options) {
  if (corpus.comments.empty()) {
    throw Error(Error::Kind::Data, "tfidf: corpus is empty");
  }

  const std::size_t n_docs = corpus.comments.size();
  std::vector<std::vector<std::string>> doc_tokens(n_docs);
  std::map<std::string, std::size_t> total_count;  // ordered: alphabetic tie-break for free
  std::map<std::string, std::size_t> doc_freq;
  for (std::size_t d = 0; d < n_docs; ++d) {
    doc_tokens[d] = tokenize(corpus.comments[d].text, stopwords);
    if (options.allow_list) {
      std::erase_if(doc_tokens[d], [&](const std::string& t) {
        return options.allow_list->find(t) == options.allow_list->end();
      });
    }
    std::set<std::string> seen;
    for (const auto& t : doc_tokens[d]) {
      ++total_count[t];
      if (seen.insert(t).second) ++doc_freq[t];
    }
  }

  // max_df filter, then keep the top max_features by total corpus count.
  std::vector<std::pair<std::string, std::size_t>> candidates;
  candidates.reserve(total_count.size());
  for (const auto& [term, count] : total_count) {
    double df_ratio = static_cast<double>(doc_freq[term]) / static_cast<double>(n_docs);
    if (df_ratio > options.max_df) continue;
    candidates.emplace_back(term, count);
  }
  if (candidates.empty()) {
    throw Error(Error::Kind::Data, "tfidf: empty vocabulary after filtering");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (candidates.size() > options.max_features) candidates.resize(options.max_features);
  std::sort(candidates.begin(), candidates.end());  // columns in term order

  TfidfMatrix matrix;
  matrix.terms.reserve(candidates.size());
  std::unordered_map<std::string, std::size_t> column;
  for (const auto& [term, count] : candidates) {
    (void)count;
    column.emplace(term, matrix.terms.size());
    matrix.terms.push_back(term);
  }

  std::vector<double> idf(matrix.terms.size());
  for (std::size_t j = 0; j < matrix.terms.size(); ++j) {
    double df = static_cast<double>(doc_freq[matrix.terms[j]]);
    idf[j] = std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + df)) + 1.0;
  }

  matrix.comment_ids.reserve(n_docs);
  for (const auto& c : corpus.comments) matrix.comment_ids.push_back(c.comment_id);

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::unordered_map<std::size_t, double> tf;
    for (const auto& t : doc_tokens[d]) {
      auto it = column.find(t);
      if (it != column.end()) tf[it->second] += 1.0;
    }
    double norm_sq = 0.0;
    for (auto& [j, count] : tf) {
      count *= idf[j];
      norm_sq += count * count;
    }
    if (norm_sq == 0.0) continue;  // document with no vocabulary term: zero row
    double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (const auto& [j, value] : tf) {
      triplets.emplace_back(static_cast<int>(d), static_cast<int>(j), value * inv_norm);
    }
  }

  matrix.values.resize(static_cast<Eigen::Index>(n_docs),
                       static_cast<Eigen::Index>(matrix.terms.size()));
  matrix.values.setFromTriplets(triplets.begin(), triplets.end());
  matrix.values.makeCompressed();
  return matrix;
}

}  // namespace dialoscope
