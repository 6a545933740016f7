#include "dialoscope/distance.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "dialoscope/csv.hpp"
#include "dialoscope/errors.hpp"
#include "dialoscope/hash.hpp"
#include "dialoscope/text.hpp"

namespace dialoscope {

std::string PeriodKey::to_string() const {
  char buf[16];
  if (month) {
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, *month);
  } else {
    std::snprintf(buf, sizeof buf, "%04d", year);
  }
  return buf;
}

IssueIndex read_issue_column(const std::filesystem::path& path, const std::string& column) {
  auto rows = read_csv_file(path);
  if (rows.empty()) throw Error(Error::Kind::Parse, "empty assignment file " + path.string());
  const auto& header = rows.front();
  auto id_col = std::find(header.begin(), header.end(), "comment_id");
  auto issue_col = std::find(header.begin(), header.end(), column);
  if (id_col == header.end() || issue_col == header.end()) {
    throw Error(Error::Kind::Parse, path.string() + ": needs columns comment_id and " + column);
  }
  std::size_t id_idx = static_cast<std::size_t>(id_col - header.begin());
  std::size_t issue_idx = static_cast<std::size_t>(issue_col - header.begin());

  IssueIndex index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max(id_idx, issue_idx)) {
      throw Error(Error::Kind::Parse, path.string() + ": short row " + std::to_string(r + 1));
    }
    std::int64_t id = 0;
    try {
      id = std::stoll(row[id_idx]);
    } catch (const std::exception&) {
      throw Error(Error::Kind::Parse, path.string() + ": bad comment_id in row " +
                                          std::to_string(r + 1));
    }
    std::set<std::string>& names = index[id];
    const std::string& joined = row[issue_idx];
    std::size_t start = 0;
    while (start <= joined.size() && !joined.empty()) {
      std::size_t pos = joined.find(';', start);
      std::string name = joined.substr(start, pos == std::string::npos ? pos : pos - start);
      if (!name.empty()) names.insert(name);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  return index;
}

std::vector<PeriodKey> period_buckets(const Corpus& corpus, PeriodGranularity granularity) {
  std::set<PeriodKey> keys;
  for (const auto& c : corpus.comments) {
    if (granularity == PeriodGranularity::Year) {
      keys.insert(PeriodKey::of_year(c.year));
    } else {
      keys.insert(PeriodKey::of_month(c.year, c.month));
    }
  }
  return {keys.begin(), keys.end()};
}

namespace {

bool comment_belongs_to(const Comment& c, const std::string& party) {
  if (c.multi_org.empty()) return c.participant_org == party;
  return std::find(c.multi_org.begin(), c.multi_org.end(), party) != c.multi_org.end();
}

std::vector<const Comment*> matching_comments(const Corpus& corpus, const IssueIndex& issues,
                                              const std::string& party, const std::string& issue,
                                              const PeriodKey& period) {
  std::vector<const Comment*> out;
  for (const auto& c : corpus.comments) {
    if (!period.contains(c.year, c.month)) continue;
    if (!comment_belongs_to(c, party)) continue;
    auto it = issues.find(c.comment_id);
    if (it == issues.end() || !it->second.count(issue)) continue;
    out.push_back(&c);
  }
  return out;
}

std::string position_key(const std::string& party, const std::string& issue,
                         const PeriodKey& period) {
  return party + "|" + issue + "|" + period.to_string();
}

}  // namespace

PartyPosition party_position(const Corpus& corpus, const IssueIndex& issues,
                             const EmbeddingBackend& backend, const std::string& party,
                             const std::string& issue, const PeriodKey& period,
                             bool weight_by_tokens) {
  auto matches = matching_comments(corpus, issues, party, issue, period);
  if (matches.empty()) {
    throw Error(Error::Kind::Data, "no position computable for " +
                                       position_key(party, issue, period) + ": no matching comments");
  }

  const std::size_t d = static_cast<std::size_t>(backend.dim());
  std::vector<double> sum(d, 0.0);
  double total_weight = 0.0;
  PartyPosition position;
  position.party = party;
  position.issue = issue;
  position.period = period;

  for (const Comment* c : matches) {
    position.word_count += word_count(c->text);
    ++position.comment_count;
    auto doc = backend.represent(*c);
    if (!doc) continue;
    double weight = weight_by_tokens ? static_cast<double>(doc->token_count) : 1.0;
    if (weight <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) sum[i] += weight * doc->vector[i];
    total_weight += weight;
  }
  if (total_weight <= 0.0) {
    throw Error(Error::Kind::Data, "no position computable for " +
                                       position_key(party, issue, period) +
                                       ": no representable comment");
  }
  for (double& x : sum) x /= total_weight;
  position.vector = std::move(sum);
  return position;
}

ReferencePosition reference_average(const std::vector<PartyPosition>& positions) {
  if (positions.size() < 2) {
    throw Error(Error::Kind::Data, "reference_average needs at least 2 positions");
  }
  const std::size_t d = positions.front().vector.size();
  ReferencePosition reference;
  reference.kind = ReferencePosition::Kind::Average;
  reference.vector.assign(d, 0.0);
  for (const auto& p : positions) {
    if (p.vector.size() != d) {
      throw Error(Error::Kind::Numeric, "reference_average: dimension mismatch for party " +
                                            p.party);
    }
    if (p.issue != positions.front().issue || !(p.period == positions.front().period)) {
      throw Error(Error::Kind::Data, "reference_average: positions mix issues or periods");
    }
    reference.parties_included.push_back(p.party);
    for (std::size_t i = 0; i < d; ++i) reference.vector[i] += p.vector[i];
  }
  for (double& x : reference.vector) x /= static_cast<double>(positions.size());
  return reference;
}

namespace {

/// Position after randomly deleting `fraction` of the party's text, or
/// nullopt when nothing representable remains. Token-level deletion on the
/// static backend, whole-comment deletion otherwise.
class Perturber {
public:
  Perturber(const std::vector<const Comment*>& comments, const EmbeddingBackend& backend)
      : backend_(backend) {
    if (const auto* static_backend = dynamic_cast<const StaticMeanBackend*>(&backend)) {
      table_ = &static_backend->table();
      for (const Comment* c : comments) {
        for (const auto& token : tokenize(c->text, static_backend->stopwords())) {
          if (auto row = table_->find(token)) token_rows_.push_back(*row);
        }
      }
      dim_ = static_cast<std::size_t>(table_->dim());
      total_sum_.assign(dim_, 0.0);
      for (std::size_t row : token_rows_) {
        auto v = table_->vector(row);
        for (std::size_t i = 0; i < dim_; ++i) total_sum_[i] += v[i];
      }
    } else {
      dim_ = static_cast<std::size_t>(backend.dim());
      for (const Comment* c : comments) {
        if (auto doc = backend.represent(*c)) docs_.push_back(std::move(*doc));
      }
    }
  }

  std::optional<std::vector<double>> sample(double fraction, std::mt19937_64& rng) {
    return table_ ? sample_tokens(fraction, rng) : sample_comments(fraction, rng);
  }

private:
  std::optional<std::vector<double>> sample_tokens(double fraction, std::mt19937_64& rng) {
    const std::size_t n = token_rows_.size();
    if (n == 0) return std::nullopt;
    auto n_drop = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (n_drop >= n) return std::nullopt;

    // partial Fisher-Yates: positions 0..n_drop-1 end up holding the dropped sample
    scratch_ = token_rows_;
    std::vector<double> mean = total_sum_;
    for (std::size_t i = 0; i < n_drop; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(scratch_[i], scratch_[pick(rng)]);
      auto v = table_->vector(scratch_[i]);
      for (std::size_t k = 0; k < dim_; ++k) mean[k] -= v[k];
    }
    double kept = static_cast<double>(n - n_drop);
    for (double& x : mean) x /= kept;
    return mean;
  }

  std::optional<std::vector<double>> sample_comments(double fraction, std::mt19937_64& rng) {
    if (docs_.empty()) return std::nullopt;
    double total_tokens = 0.0;
    for (const auto& doc : docs_) total_tokens += static_cast<double>(doc.token_count);
    double target = fraction * total_tokens;

    std::vector<std::size_t> order(docs_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    double dropped = 0.0;
    std::size_t cut = 0;
    while (cut < order.size() && dropped + 0.5 < target) {
      dropped += static_cast<double>(docs_[order[cut]].token_count);
      ++cut;
    }
    if (cut >= order.size()) return std::nullopt;

    std::vector<double> mean(dim_, 0.0);
    double weight = 0.0;
    for (std::size_t i = cut; i < order.size(); ++i) {
      const DocVector& doc = docs_[order[i]];
      double w = static_cast<double>(doc.token_count);
      for (std::size_t k = 0; k < dim_; ++k) mean[k] += w * doc.vector[k];
      weight += w;
    }
    if (weight <= 0.0) return std::nullopt;
    for (double& x : mean) x /= weight;
    return mean;
  }

  const EmbeddingBackend& backend_;
  const EmbeddingTable* table_ = nullptr;
  std::vector<std::size_t> token_rows_;
  std::vector<std::size_t> scratch_;
  std::vector<double> total_sum_;
  std::vector<DocVector> docs_;
  std::size_t dim_ = 0;
};

}  // namespace

double estimate_uncertainty(const Corpus& corpus, const IssueIndex& issues,
                            const EmbeddingBackend& backend, const std::string& party,
                            const std::string& issue, const PeriodKey& period,
                            const std::vector<double>& reference, double fraction,
                            int n_resamples, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(Error::Kind::Config, "estimate_uncertainty: fraction must be in (0,1)");
  }
  if (n_resamples < 1) return 0.0;

  auto matches = matching_comments(corpus, issues, party, issue, period);
  Perturber perturber(matches, backend);

  std::vector<double> sims;
  sims.reserve(static_cast<std::size_t>(n_resamples));
  int failed = 0;
  for (int r = 0; r < n_resamples; ++r) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    auto mean = perturber.sample(fraction, rng);
    if (!mean) {
      ++failed;
      continue;
    }
    try {
      sims.push_back(cosine(*mean, reference));
    } catch (const Error&) {
      ++failed;  // zero-norm perturbed position
    }
  }
  if (failed * 2 > n_resamples) {
    throw Error(Error::Kind::Data, "insufficient data for uncertainty of " +
                                       position_key(party, issue, period) + " (" +
                                       std::to_string(failed) + "/" +
                                       std::to_string(n_resamples) + " resamples uncomputable)");
  }
  if (sims.size() < 2) return 0.0;

  // a perturbation that cannot move the position yields identical samples;
  // report exactly zero instead of summation dust
  auto [lo, hi] = std::minmax_element(sims.begin(), sims.end());
  if (*lo == *hi) return 0.0;

  double mean = 0.0;
  for (double s : sims) mean += s;
  mean /= static_cast<double>(sims.size());
  double ss = 0.0;
  for (double s : sims) ss += (s - mean) * (s - mean);
  return std::sqrt(ss / static_cast<double>(sims.size() - 1));
}

DistanceReport distance_lines(const Corpus& corpus, const IssueIndex& issues,
                              const EmbeddingBackend& backend,
                              const std::vector<std::string>& parties,
                              const std::vector<std::string>& issue_names,
                              const std::vector<PeriodKey>& periods,
                              const ReferenceSpec& reference, const DistanceOptions& options) {
  if (reference.kind == ReferencePosition::Kind::Baseline &&
      std::find(parties.begin(), parties.end(), reference.baseline_party) == parties.end()) {
    throw Error(Error::Kind::Config,
                "baseline party '" + reference.baseline_party + "' is not in the party list");
  }

  DistanceReport report;
  report.reference = reference;
  report.backend = backend.name();

  for (const auto& issue : issue_names) {
    for (const auto& period : periods) {
      std::map<std::string, PartyPosition> positions;
      for (const auto& party : parties) {
        try {
          positions.emplace(party, party_position(corpus, issues, backend, party, issue, period,
                                                  options.weight_by_tokens));
        } catch (const Error& e) {
          if (e.kind() != Error::Kind::Data) throw;  // gaps only for missing data
        }
      }

      std::optional<std::vector<double>> ref_vector;
      if (reference.kind == ReferencePosition::Kind::Average) {
        if (positions.size() >= 2) {
          std::vector<PartyPosition> list;
          list.reserve(positions.size());
          for (const auto& [party, pos] : positions) {
            (void)party;
            list.push_back(pos);
          }
          ref_vector = reference_average(list).vector;
        }
      } else if (auto it = positions.find(reference.baseline_party); it != positions.end()) {
        ref_vector = it->second.vector;
      }

      for (const auto& party : parties) {
        if (reference.kind == ReferencePosition::Kind::Baseline &&
            party == reference.baseline_party && !reference.show_baseline) {
          continue;
        }
        DistanceEntry entry;
        entry.party = party;
        entry.issue = issue;
        entry.period = period;
        auto pos = positions.find(party);
        if (pos != positions.end() && ref_vector) {
          entry.similarity = cosine(pos->second.vector, *ref_vector);
          entry.word_count = pos->second.word_count;
          if (options.n_resamples > 0) {
            entry.uncertainty = estimate_uncertainty(
                corpus, issues, backend, party, issue, period, *ref_vector, options.fraction,
                options.n_resamples,
                mix_seed(options.seed, fnv1a_64(position_key(party, issue, period))));
          }
        } else if (pos != positions.end()) {
          entry.word_count = pos->second.word_count;
        }
        report.entries.push_back(std::move(entry));
      }
    }
  }
  return report;
}

PairwiseMatrix pairwise_matrix(const Corpus& corpus, const IssueIndex& issues,
                               const EmbeddingBackend& backend,
                               const std::vector<std::string>& parties,
                               const std::string& issue, const PeriodKey& period,
                               std::optional<std::array<double, 3>> bounds,
                               bool weight_by_tokens) {
  std::vector<PartyPosition> positions;
  positions.reserve(parties.size());
  for (const auto& party : parties) {
    try {
      positions.push_back(
          party_position(corpus, issues, backend, party, issue, period, weight_by_tokens));
    } catch (const Error& e) {
      if (e.kind() == Error::Kind::Data) {
        throw Error(Error::Kind::Data, "pairwise matrix: missing position for party '" + party +
                                           "' (" + issue + ", " + period.to_string() + ")");
      }
      throw;
    }
  }

  const std::size_t n = parties.size();
  PairwiseMatrix matrix;
  matrix.parties = parties;
  matrix.sims.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sim = cosine(positions[i].vector, positions[j].vector);
      matrix.sims[i][j] = sim;
      matrix.sims[j][i] = sim;
    }
  }

  if (bounds) {
    matrix.bounds = *bounds;
  } else {
    double lo = 1.0, hi = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        lo = std::min(lo, matrix.sims[i][j]);
        hi = std::max(hi, matrix.sims[i][j]);
      }
    }
    double width = (hi - lo) / 4.0;
    matrix.bounds = {hi - width, hi - 2.0 * width, hi - 3.0 * width};
  }

  matrix.levels.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = matrix.sims[i][j];
      int level = 3;
      if (s >= matrix.bounds[0]) {
        level = 0;
      } else if (s >= matrix.bounds[1]) {
        level = 1;
      } else if (s >= matrix.bounds[2]) {
        level = 2;
      }
      matrix.levels[i][j] = level;
    }
  }
  return matrix;
}

std::vector<ActivityRow> activity_counts(const Corpus& corpus, const IssueIndex& issues,
                                         ActivityGroupBy group_by,
                                         PeriodGranularity granularity) {
  struct Key {
    std::string issue;
    std::string party;
    std::optional<PeriodKey> period;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::pair<std::size_t, std::size_t>> counts;  // words, comments

  for (const auto& c : corpus.comments) {
    auto it = issues.find(c.comment_id);
    if (it == issues.end() || it->second.empty()) continue;
    std::size_t words = word_count(c.text);

    std::vector<std::string> orgs;
    if (group_by == ActivityGroupBy::IssueParty) {
      orgs = c.multi_org.empty() ? std::vector<std::string>{c.participant_org} : c.multi_org;
    } else {
      orgs = {""};
    }
    std::optional<PeriodKey> period;
    if (group_by == ActivityGroupBy::IssuePeriod) {
      period = granularity == PeriodGranularity::Year ? PeriodKey::of_year(c.year)
                                                      : PeriodKey::of_month(c.year, c.month);
    }
    for (const auto& issue : it->second) {
      for (const auto& org : orgs) {
        auto& cell = counts[{issue, org, period}];
        cell.first += words;
        cell.second += 1;
      }
    }
  }

  std::vector<ActivityRow> rows;
  rows.reserve(counts.size());
  for (const auto& [key, cell] : counts) {
    rows.push_back({key.issue, key.party, key.period, cell.first, cell.second});
  }
  return rows;
}

void write_distance_report(const std::filesystem::path& path, const DistanceReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  const std::vector<std::string> header = {"party",       "issue",      "period",
                                           "similarity",  "uncertainty", "word_count",
                                           "backend"};
  csv_write_row(out, header);
  char buf[32];
  std::vector<std::string> row(7);
  for (const auto& e : report.entries) {
    row[0] = e.party;
    row[1] = e.issue;
    row[2] = e.period.to_string();
    if (e.similarity) {
      std::snprintf(buf, sizeof buf, "%.9f", *e.similarity);
      row[3] = buf;
    } else {
      row[3].clear();  // gap, never a zero
    }
    std::snprintf(buf, sizeof buf, "%.9f", e.uncertainty);
    row[4] = buf;
    row[5] = std::to_string(e.word_count);
    row[6] = report.backend;
    csv_write_row(out, row);
  }
}

void write_pairwise_matrix(const std::filesystem::path& path, const PairwiseMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  char buf[32];
  std::vector<std::string> row;
  row.push_back("party");
  for (const auto& p : matrix.parties) row.push_back(p);
  csv_write_row(out, row);
  for (std::size_t i = 0; i < matrix.parties.size(); ++i) {
    row.clear();
    row.push_back(matrix.parties[i]);
    for (double s : matrix.sims[i]) {
      std::snprintf(buf, sizeof buf, "%.9f", s);
      row.push_back(buf);
    }
    csv_write_row(out, row);
  }
  row.clear();
  row.push_back("bounds");
  for (double b : matrix.bounds) {
    std::snprintf(buf, sizeof buf, "%.9f", b);
    row.push_back(buf);
  }
  csv_write_row(out, row);
}

void write_activity_counts(const std::filesystem::path& path,
                           const std::vector<ActivityRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  const std::vector<std::string> header = {"issue", "party", "period", "word_count",
                                           "comment_count"};
  csv_write_row(out, header);
  std::vector<std::string> row(5);
  for (const auto& r : rows) {
    row[0] = r.issue;
    row[1] = r.party;
    row[2] = r.period ? r.period->to_string() : "";
    row[3] = std::to_string(r.word_count);
    row[4] = std::to_string(r.comment_count);
    csv_write_row(out, row);
  }
}

}  // namespace dialoscope
