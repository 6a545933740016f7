#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dialoscope/corpus.hpp"
#include "dialoscope/errors.hpp"
#include "dialoscope/text.hpp"

namespace dialoscope {

/// Static word-vector table in the usual `term v1 v2 ... vd` text format.
/// Components are stored as float32 (the precision such files carry); all
/// derived arithmetic runs in double.
class EmbeddingTable {
public:
  EmbeddingTable() = default;
  EmbeddingTable(int dim, std::string source_tag) : dim_(dim), source_tag_(std::move(source_tag)) {}

  int dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const std::string& source_tag() const { return source_tag_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  std::optional<std::size_t> find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::span<const float> vector(std::size_t row) const {
    return {data_.data() + row * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  const std::string& term(std::size_t row) const { return vocab_[row]; }

  /// Appends a term; rejects duplicates and dimension mismatches.
  void add(std::string term, std::span<const float> components);

private:
  int dim_ = 0;
  std::string source_tag_;
  std::vector<std::string> vocab_;
  std::vector<float> data_;  // row-major, vocab.size() x dim
  std::unordered_map<std::string, std::size_t> index_;
};

/// Load a static-vector text file; dimension inferred from the first row.
EmbeddingTable load_table(const std::filesystem::path& path, std::string source_tag = "");

/// cos(a, b) = dot/(|a||b|), accumulated in double. Throws Error(Numeric) on
/// zero-norm input or dimension mismatch.
template <typename A, typename B>
double cosine(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size())
    throw Error(Error::Kind::Numeric, "cosine: dimension mismatch (" +
                                          std::to_string(a.size()) + " vs " +
                                          std::to_string(b.size()) + ")");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double x = static_cast<double>(a[i]);
    double y = static_cast<double>(b[i]);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0)
    throw Error(Error::Kind::Numeric, "cosine: zero-norm input");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return cosine(std::span<const double>(a), std::span<const double>(b));
}

struct Neighbor {
  std::string term;
  double sim;
  bool operator==(const Neighbor&) const = default;
};

/// All vocabulary terms with cosine >= min_sim to `query_term`'s vector,
/// descending by similarity (ties by vocabulary order), truncated at
/// max_words. The query term itself is included with similarity exactly 1.
std::vector<Neighbor> neighbors(const EmbeddingTable& table, const std::string& query_term,
                                double min_sim, std::size_t max_words);

/// Same scan against an arbitrary query vector (no self term).
std::vector<Neighbor> neighbors(const EmbeddingTable& table, std::span<const double> query,
                                double min_sim, std::size_t max_words);

/// Mean-pooled document vector.
struct DocVector {
  std::int64_t comment_id = -1;
  std::vector<double> vector;
  double token_coverage = 0.0;   // in-vocabulary tokens / total tokens
  std::size_t token_count = 0;   // tokens that contributed to the vector
};

/// Tokenize, split into consecutive chunks of <= chunk_limit tokens, average
/// in-vocabulary token vectors per chunk, then average the chunk vectors.
/// Throws Error(Data) when no token is representable.
DocVector embed_text(const EmbeddingTable& table, std::string_view text,
                     const StopwordSet& stopwords, std::size_t chunk_limit);

/// Precomputed per-comment vectors, CSV `comment_id,v1,...,vd`.
std::map<std::int64_t, DocVector> load_contextual_vectors(const std::filesystem::path& path);
void write_contextual_vectors(const std::filesystem::path& path,
                              const std::map<std::int64_t, DocVector>& vectors);

/// Uniform interface over the two document-vector sources used by the
/// distance analyses. Implementations are immutable and safe to share.
class EmbeddingBackend {
public:
  virtual ~EmbeddingBackend() = default;
  /// Document vector for a comment, or nullopt when unrepresentable.
  /// token_count carries the averaging weight for party positions.
  virtual std::optional<DocVector> represent(const Comment& comment) const = 0;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
};

/// Mean-of-word-vectors fallback over a static table.
class StaticMeanBackend : public EmbeddingBackend {
public:
  StaticMeanBackend(const EmbeddingTable& table, const StopwordSet& stopwords,
                    std::size_t chunk_limit = 512)
      : table_(table), stopwords_(stopwords), chunk_limit_(chunk_limit) {}

  std::optional<DocVector> represent(const Comment& comment) const override;
  int dim() const override { return table_.dim(); }
  std::string name() const override { return "static:" + table_.source_tag(); }

  const EmbeddingTable& table() const { return table_; }
  const StopwordSet& stopwords() const { return stopwords_; }
  std::size_t chunk_limit() const { return chunk_limit_; }

private:
  const EmbeddingTable& table_;
  const StopwordSet& stopwords_;
  std::size_t chunk_limit_;
};

/// Offline-produced vectors keyed by comment id; the averaging weight is the
/// comment's token count under the shared tokenizer.
class PrecomputedBackend : public EmbeddingBackend {
public:
  PrecomputedBackend(std::map<std::int64_t, DocVector> vectors, const StopwordSet& stopwords);

  std::optional<DocVector> represent(const Comment& comment) const override;
  int dim() const override { return dim_; }
  std::string name() const override { return "precomputed"; }

private:
  std::map<std::int64_t, DocVector> vectors_;
  const StopwordSet& stopwords_;
  int dim_ = 0;
};

}  // namespace dialoscope
