#include "dialoscope/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "dialoscope/csv.hpp"

namespace dialoscope {

void EmbeddingTable::add(std::string term, std::span<const float> components) {
  if (term.empty()) throw Error(Error::Kind::Data, "embedding table: empty term");
  if (dim_ == 0) dim_ = static_cast<int>(components.size());
  if (static_cast<int>(components.size()) != dim_) {
    throw Error(Error::Kind::Data, "embedding table: vector for '" + term + "' has " +
                                       std::to_string(components.size()) + " components, expected " +
                                       std::to_string(dim_));
  }
  if (index_.count(term)) {
    throw Error(Error::Kind::Data, "embedding table: duplicate term '" + term + "'");
  }
  index_.emplace(term, vocab_.size());
  vocab_.push_back(std::move(term));
  data_.insert(data_.end(), components.begin(), components.end());
}

EmbeddingTable load_table(const std::filesystem::path& path, std::string source_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot open embedding file " + path.string());
  if (source_tag.empty()) source_tag = path.filename().string();

  EmbeddingTable table(0, source_tag);
  std::string line;
  std::size_t line_no = 0;
  std::vector<float> components;
  int dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) {
      throw ParseError("embedding file: expected `term v1 ... vd`", line_no);
    }
    std::string term = line.substr(0, sp);
    components.clear();
    const char* p = line.data() + sp + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float value = 0.f;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc()) {
        throw ParseError("embedding file: non-numeric component for term '" + term + "'", line_no);
      }
      components.push_back(value);
      p = next;
    }
    if (dim == 0) {
      dim = static_cast<int>(components.size());
      if (dim == 0) throw ParseError("embedding file: first row has no components", line_no);
    } else if (static_cast<int>(components.size()) != dim) {
      throw ParseError("embedding file: row has " + std::to_string(components.size()) +
                           " components, expected " + std::to_string(dim),
                       line_no);
    }
    try {
      table.add(std::move(term), components);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (table.size() == 0) throw Error(Error::Kind::Data, "embedding file is empty: " + path.string());
  return table;
}

namespace {

std::vector<Neighbor> scan_neighbors(const EmbeddingTable& table, std::span<const double> query,
                                     double min_sim, std::size_t max_words,
                                     std::optional<std::size_t> self_row) {
  std::vector<Neighbor> hits;
  for (std::size_t row = 0; row < table.size(); ++row) {
    double sim;
    if (self_row && row == *self_row) {
      sim = 1.0;
    } else {
      try {
        sim = cosine(std::span<const float>(table.vector(row)), query);
      } catch (const Error&) {
        continue;  // zero vector in the table cannot be a neighbor
      }
    }
    if (sim >= min_sim) hits.push_back({table.term(row), sim});
  }
  // descending similarity; ties keep vocabulary order (stable sort over an
  // already vocabulary-ordered scan)
  std::stable_sort(hits.begin(), hits.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.sim > b.sim; });
  if (hits.size() > max_words) hits.resize(max_words);
  return hits;
}

}  // namespace

std::vector<Neighbor> neighbors(const EmbeddingTable& table, const std::string& query_term,
                                double min_sim, std::size_t max_words) {
  if (!(min_sim > 0.0 && min_sim < 1.0)) {
    throw Error(Error::Kind::Config, "neighbors: min_sim must be in (0,1)");
  }
  auto row = table.find(query_term);
  if (!row) {
    throw Error(Error::Kind::Data, "neighbors: term '" + query_term + "' not in vocabulary");
  }
  std::span<const float> v = table.vector(*row);
  std::vector<double> query(v.begin(), v.end());
  return scan_neighbors(table, query, min_sim, max_words, *row);
}

std::vector<Neighbor> neighbors(const EmbeddingTable& table, std::span<const double> query,
                                double min_sim, std::size_t max_words) {
  if (!(min_sim > 0.0 && min_sim < 1.0)) {
    throw Error(Error::Kind::Config, "neighbors: min_sim must be in (0,1)");
  }
  return scan_neighbors(table, query, min_sim, max_words, std::nullopt);
}

DocVector embed_text(const EmbeddingTable& table, std::string_view text,
                     const StopwordSet& stopwords, std::size_t chunk_limit) {
  if (chunk_limit < 1) throw Error(Error::Kind::Config, "embed_text: chunk_limit must be >= 1");
  std::vector<std::string> tokens = tokenize(text, stopwords);

  const std::size_t d = static_cast<std::size_t>(table.dim());
  std::vector<double> chunk_sum(d, 0.0);
  std::vector<double> result(d, 0.0);
  std::size_t in_chunk = 0;        // tokens seen in the current chunk
  std::size_t chunk_hits = 0;      // in-vocabulary tokens in the current chunk
  std::size_t chunks_used = 0;     // chunks with at least one representable token
  std::size_t total_hits = 0;

  auto close_chunk = [&] {
    if (chunk_hits > 0) {
      for (std::size_t i = 0; i < d; ++i) result[i] += chunk_sum[i] / chunk_hits;
      ++chunks_used;
    }
    std::fill(chunk_sum.begin(), chunk_sum.end(), 0.0);
    in_chunk = 0;
    chunk_hits = 0;
  };

  for (const std::string& token : tokens) {
    if (in_chunk == chunk_limit) close_chunk();
    ++in_chunk;
    if (auto row = table.find(token)) {
      std::span<const float> v = table.vector(*row);
      for (std::size_t i = 0; i < d; ++i) chunk_sum[i] += v[i];
      ++chunk_hits;
      ++total_hits;
    }
  }
  close_chunk();

  if (total_hits == 0) {
    throw Error(Error::Kind::Data, "unrepresentable text: no token found in vocabulary");
  }
  for (double& x : result) x /= chunks_used;

  DocVector doc;
  doc.vector = std::move(result);
  doc.token_coverage = tokens.empty() ? 0.0
                                      : static_cast<double>(total_hits) /
                                            static_cast<double>(tokens.size());
  doc.token_count = total_hits;
  return doc;
}

std::map<std::int64_t, DocVector> load_contextual_vectors(const std::filesystem::path& path) {
  std::map<std::int64_t, DocVector> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot open contextual-vector file " + path.string());
  CsvReader reader(in);
  std::size_t dim = 0;
  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() < 2) {
      throw ParseError("contextual vectors: row needs comment_id plus components",
                       reader.row_line());
    }
    DocVector doc;
    try {
      doc.comment_id = std::stoll((*row)[0]);
    } catch (const std::exception&) {
      throw ParseError("contextual vectors: bad comment_id '" + (*row)[0] + "'", reader.row_line());
    }
    doc.vector.reserve(row->size() - 1);
    for (std::size_t i = 1; i < row->size(); ++i) {
      const std::string& field = (*row)[i];
      double value = 0.0;
      auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || p != field.data() + field.size()) {
        throw ParseError("contextual vectors: non-numeric component '" + field + "'",
                         reader.row_line());
      }
      doc.vector.push_back(value);
    }
    if (dim == 0) {
      dim = doc.vector.size();
    } else if (doc.vector.size() != dim) {
      throw ParseError("contextual vectors: inconsistent dimension (" +
                           std::to_string(doc.vector.size()) + " vs " + std::to_string(dim) + ")",
                       reader.row_line());
    }
    doc.token_coverage = 1.0;
    doc.token_count = 0;  // weight filled in by the backend from the comment text
    if (!out.emplace(doc.comment_id, std::move(doc)).second) {
      throw ParseError("contextual vectors: duplicate comment_id", reader.row_line());
    }
  }
  return out;
}

void write_contextual_vectors(const std::filesystem::path& path,
                              const std::map<std::int64_t, DocVector>& vectors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  char buf[32];
  for (const auto& [id, doc] : vectors) {
    out << id;
    for (double v : doc.vector) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::optional<DocVector> StaticMeanBackend::represent(const Comment& comment) const {
  try {
    DocVector doc = embed_text(table_, comment.text, stopwords_, chunk_limit_);
    doc.comment_id = comment.comment_id;
    return doc;
  } catch (const Error& e) {
    if (e.kind() == Error::Kind::Data) return std::nullopt;
    throw;
  }
}

PrecomputedBackend::PrecomputedBackend(std::map<std::int64_t, DocVector> vectors,
                                       const StopwordSet& stopwords)
    : vectors_(std::move(vectors)), stopwords_(stopwords) {
  if (!vectors_.empty()) dim_ = static_cast<int>(vectors_.begin()->second.vector.size());
}

std::optional<DocVector> PrecomputedBackend::represent(const Comment& comment) const {
  auto it = vectors_.find(comment.comment_id);
  if (it == vectors_.end()) return std::nullopt;
  DocVector doc = it->second;
  doc.comment_id = comment.comment_id;
  doc.token_count = tokenize(comment.text, stopwords_).size();
  if (doc.token_count == 0) doc.token_count = 1;  // a vector exists, keep it representable
  return doc;
}

}  // namespace dialoscope
