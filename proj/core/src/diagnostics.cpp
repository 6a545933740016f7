#include "dialoscope/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dialoscope/errors.hpp"

namespace dialoscope {

AnisotropyProfile anisotropy_profile(const EmbeddingTable& table) {
  if (table.size() == 0) throw Error(Error::Kind::Data, "anisotropy_profile: empty table");
  AnisotropyProfile profile;
  profile.dim = table.dim();
  profile.vocab_size = table.size();
  profile.argmax_counts.assign(static_cast<std::size_t>(table.dim()), 0);
  for (std::size_t row = 0; row < table.size(); ++row) {
    auto v = table.vector(row);
    std::size_t argmax = 0;
    float best = std::abs(v[0]);
    for (std::size_t i = 1; i < v.size(); ++i) {
      float mag = std::abs(v[i]);
      if (mag > best) {
        best = mag;
        argmax = i;
      }
    }
    ++profile.argmax_counts[argmax];
  }
  return profile;
}

namespace {

/// Incremental prefix-mean walker shared by the two trace operations.
class PrefixMean {
public:
  explicit PrefixMean(const EmbeddingTable& table)
      : table_(table), sum_(static_cast<std::size_t>(table.dim()), 0.0) {}

  /// Returns false for out-of-vocabulary tokens.
  bool push(const std::string& token) {
    auto row = table_.find(token);
    if (!row) return false;
    last_row_ = *row;
    auto v = table_.vector(*row);
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += v[i];
    ++count_;
    return true;
  }

  std::size_t count() const { return count_; }
  std::span<const float> last_vector() const { return table_.vector(last_row_); }
  std::vector<double> mean() const {
    std::vector<double> m(sum_);
    for (double& x : m) x /= static_cast<double>(count_);
    return m;
  }

private:
  const EmbeddingTable& table_;
  std::vector<double> sum_;
  std::size_t count_ = 0;
  std::size_t last_row_ = 0;
};

}  // namespace

PrefixTrace prefix_trace(const EmbeddingTable& table, std::span<const std::string> tokens,
                         std::span<const std::size_t> sample_points) {
  std::vector<std::size_t> wanted(sample_points.begin(), sample_points.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  PrefixTrace trace;
  PrefixMean walker(table);
  std::size_t next = 0;
  for (const auto& token : tokens) {
    if (!walker.push(token)) {
      ++trace.tokens_skipped;
      continue;
    }
    ++trace.tokens_used;
    while (next < wanted.size() && wanted[next] < walker.count()) ++next;
    if (next < wanted.size() && wanted[next] == walker.count()) {
      PrefixPoint point;
      point.n = walker.count();
      auto raw = walker.last_vector();
      point.raw_max = *std::max_element(raw.begin(), raw.end());
      point.raw_min = *std::min_element(raw.begin(), raw.end());
      std::vector<double> mean = walker.mean();
      point.mean_max = *std::max_element(mean.begin(), mean.end());
      point.mean_min = *std::min_element(mean.begin(), mean.end());
      trace.points.push_back(point);
      ++next;
    }
  }
  if (trace.tokens_used == 0) {
    throw Error(Error::Kind::Data, "prefix_trace: no representable token in the stream");
  }
  return trace;
}

std::vector<ConvergencePoint> cross_corpus_convergence(const EmbeddingTable& table,
                                                       std::span<const std::string> tokens_a,
                                                       std::span<const std::string> tokens_b,
                                                       std::span<const std::size_t> sample_points) {
  std::vector<std::size_t> wanted(sample_points.begin(), sample_points.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  PrefixMean a(table), b(table);
  std::size_t ia = 0, ib = 0;
  auto advance_to = [&](PrefixMean& walker, std::span<const std::string> tokens, std::size_t& i,
                        std::size_t n) {
    while (walker.count() < n && i < tokens.size()) walker.push(tokens[i++]);
    return walker.count() == n;
  };

  std::vector<ConvergencePoint> points;
  for (std::size_t n : wanted) {
    bool ok_a = advance_to(a, tokens_a, ia, n);
    bool ok_b = advance_to(b, tokens_b, ib, n);
    if (!ok_a || !ok_b) break;  // one stream exhausted before n representable tokens
    ConvergencePoint point;
    point.n = n;
    try {
      point.cosine = cosine(a.mean(), b.mean());
    } catch (const Error&) {
      point.cosine = std::nullopt;  // zero-norm prefix mean: emitted as missing
    }
    points.push_back(point);
  }
  if (!wanted.empty() &&
      ((a.count() == 0 && !tokens_a.empty()) || (b.count() == 0 && !tokens_b.empty()))) {
    throw Error(Error::Kind::Data, "cross_corpus_convergence: a stream has no representable token");
  }
  return points;
}

std::vector<std::size_t> default_sample_points(std::size_t max_n) {
  std::vector<std::size_t> points;
  for (std::size_t decade = 1;; decade *= 10) {
    for (std::size_t mult : {1, 2, 5}) {
      std::size_t n = decade * mult;
      if (n > max_n) return points;
      points.push_back(n);
    }
  }
}

void write_anisotropy_profile(const std::filesystem::path& path,
                              const AnisotropyProfile& profile) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << "dim,count\n";
  for (std::size_t i = 0; i < profile.argmax_counts.size(); ++i) {
    out << i << ',' << profile.argmax_counts[i] << '\n';
  }
}

void write_prefix_trace(const std::filesystem::path& path, const PrefixTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << "n,max_raw,min_raw,max_mean,min_mean\n";
  char buf[128];
  for (const auto& p : trace.points) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", p.n, p.raw_max, p.raw_min,
                  p.mean_max, p.mean_min);
    out << buf;
  }
}

void write_convergence(const std::filesystem::path& path,
                       const std::vector<ConvergencePoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  out << "n,cosine\n";
  char buf[64];
  for (const auto& p : points) {
    if (p.cosine) {
      std::snprintf(buf, sizeof buf, "%zu,%.9f\n", p.n, *p.cosine);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,\n", p.n);
    }
    out << buf;
  }
}

}  // namespace dialoscope
