#include "dialoscope/issue_query.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "dialoscope/csv.hpp"
#include "dialoscope/errors.hpp"

namespace dialoscope {

namespace {

std::vector<std::string> split_seeds(const std::string& field) {
  std::vector<std::string> seeds;
  std::size_t start = 0;
  while (start <= field.size()) {
    std::size_t pos = field.find(';', start);
    std::string seed = field.substr(start, pos == std::string::npos ? pos : pos - start);
    // trim + lowercase
    std::size_t b = seed.find_first_not_of(" \t");
    std::size_t e = seed.find_last_not_of(" \t");
    if (b != std::string::npos) {
      seed = seed.substr(b, e - b + 1);
      for (char& c : seed) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (std::find(seeds.begin(), seeds.end(), seed) == seeds.end()) seeds.push_back(seed);
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return seeds;
}

}  // namespace

std::vector<IssueSpec> read_issue_specs(const std::filesystem::path& path) {
  auto rows = read_csv_file(path);
  std::vector<IssueSpec> specs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 2) {
      throw Error(Error::Kind::Parse, "issue file " + path.string() + ": row " +
                                          std::to_string(i + 1) +
                                          " needs 2 columns (issue_name,seed_keywords)");
    }
    if (i == 0 && row[0] == "issue_name") continue;
    IssueSpec spec;
    spec.issue_name = row[0];
    spec.seed_keywords = split_seeds(row[1]);
    if (spec.seed_keywords.empty()) {
      throw Error(Error::Kind::Data, "issue '" + spec.issue_name + "' has no seed keywords");
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

namespace {

/// Mean of the in-vocabulary word vectors of a (possibly multiword) seed.
std::optional<std::vector<double>> seed_vector(const EmbeddingTable& table,
                                               const std::string& seed) {
  std::vector<double> sum(static_cast<std::size_t>(table.dim()), 0.0);
  std::size_t hits = 0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (auto row = table.find(word)) {
      auto v = table.vector(*row);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
      ++hits;
    }
    word.clear();
  };
  for (char c : seed) {
    if (c == ' ' || c == '\t') {
      flush();
    } else {
      word.push_back(c);
    }
  }
  flush();
  if (hits == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(hits);
  return sum;
}

}  // namespace

ExpandedQuery expand_query(const EmbeddingTable& table, const IssueSpec& spec,
                           const ExpandOptions& options) {
  if (!(options.base_sim > 0.0 && options.base_sim <= options.max_sim && options.max_sim < 1.0)) {
    throw Error(Error::Kind::Config, "expand_query: need 0 < base_sim <= max_sim < 1");
  }
  if (options.step <= 0.0) {
    throw Error(Error::Kind::Config, "expand_query: step must be positive");
  }

  ExpandedQuery query;
  query.issue_name = spec.issue_name;
  query.seed_keywords = spec.seed_keywords;

  for (const std::string& seed : spec.seed_keywords) {
    auto vec = seed_vector(table, seed);
    if (!vec) {
      query.skipped_seeds.push_back(seed);
      continue;
    }
    double threshold = options.base_sim;
    std::vector<Neighbor> hits = neighbors(table, std::span<const double>(*vec), threshold,
                                           table.size());
    while (hits.size() > options.overflow_count && threshold < options.max_sim) {
      threshold = std::min(threshold + options.step, options.max_sim);
      std::erase_if(hits, [&](const Neighbor& n) { return n.sim < threshold; });
    }
    if (hits.size() > options.overflow_count) hits.resize(options.overflow_count);

    // the seed itself always leads with similarity exactly 1.0
    std::erase_if(hits, [&](const Neighbor& n) { return n.term == seed; });
    hits.insert(hits.begin(), Neighbor{seed, 1.0});

    query.effective_threshold[seed] = threshold;
    query.expansion[seed] = std::move(hits);
  }

  if (query.expansion.empty()) {
    throw Error(Error::Kind::Data,
                "issue '" + spec.issue_name + "' has no representable seeds");
  }
  return query;
}

ClassifierConfig combine_modes(const std::vector<ExpandedQuery>& queries, QueryMode mode) {
  if (queries.empty()) {
    throw Error(Error::Kind::Config, "classifier needs at least one expanded query");
  }
  if (mode != QueryMode::PerTerm && mode != QueryMode::Combined) {
    throw Error(Error::Kind::Config, "unknown query mode");
  }
  return ClassifierConfig{mode};
}

namespace {

/// Matching terms of one seed's expansion, split into unigrams and phrases.
struct TermMatcher {
  std::set<std::string> unigrams;
  std::vector<std::vector<std::string>> phrases;  // tokenized multiword terms

  void add(const std::string& term, const StopwordSet& stopwords) {
    std::vector<std::string> tokens = tokenize(term, stopwords);
    if (tokens.empty()) {
      // a term that tokenizes away (e.g. a stopword seed) can never match
      return;
    }
    if (tokens.size() == 1) {
      unigrams.insert(tokens[0]);
    } else {
      phrases.push_back(std::move(tokens));
    }
  }

  /// Terms of this matcher found in `tokens` (joined phrases for multiword).
  std::set<std::string> match(const std::vector<std::string>& tokens) const {
    std::set<std::string> found;
    for (const auto& tok : tokens) {
      if (unigrams.count(tok)) found.insert(tok);
    }
    for (const auto& phrase : phrases) {
      if (phrase.size() > tokens.size()) continue;
      for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + i)) {
          std::string joined;
          for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (k) joined.push_back(' ');
            joined += phrase[k];
          }
          found.insert(joined);
          break;
        }
      }
    }
    return found;
  }
};

}  // namespace

ClassifyResult run_classifier(const Corpus& corpus, const std::vector<ExpandedQuery>& queries,
                              const ClassifierConfig& config, const StopwordSet& stopwords) {
  // issue -> (seed -> matcher)
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, TermMatcher>>>> matchers;
  for (const auto& query : queries) {
    std::vector<std::pair<std::string, TermMatcher>> per_seed;
    for (const auto& [seed, hits] : query.expansion) {
      TermMatcher matcher;
      for (const auto& n : hits) matcher.add(n.term, stopwords);
      per_seed.emplace_back(seed, std::move(matcher));
    }
    matchers.emplace_back(query.issue_name, std::move(per_seed));
  }

  ClassifyResult result;
  result.assignments.reserve(corpus.comments.size());
  for (const Comment& comment : corpus.comments) {
    std::vector<std::string> tokens = tokenize(comment.text, stopwords);
    IssueAssignment assignment;
    assignment.comment_id = comment.comment_id;
    for (const auto& [issue, per_seed] : matchers) {
      std::set<std::string> all_found;
      for (const auto& [seed, matcher] : per_seed) {
        std::set<std::string> found = matcher.match(tokens);
        if (found.empty()) continue;
        all_found.insert(found.begin(), found.end());
        if (config.mode == QueryMode::PerTerm) {
          for (const auto& term : found) {
            result.triggers.push_back({comment.comment_id, issue, seed, term});
          }
        }
      }
      if (!all_found.empty()) assignment.matched_terms[issue] = std::move(all_found);
    }
    result.assignments.push_back(std::move(assignment));
  }
  return result;
}

std::vector<IssueAssignment> classify_predefined(const Corpus& corpus,
                                                 const std::vector<ExpandedQuery>& queries,
                                                 const StopwordSet& stopwords) {
  auto config = combine_modes(queries, QueryMode::Combined);
  return run_classifier(corpus, queries, config, stopwords).assignments;
}

void write_expansion_report(const std::filesystem::path& path,
                            const std::vector<ExpandedQuery>& queries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  const std::vector<std::string> header = {"issue", "seed", "near_term", "sim",
                                           "effective_threshold"};
  csv_write_row(out, header);
  char sim_buf[32], thr_buf[32];
  std::vector<std::string> row(5);
  for (const auto& query : queries) {
    for (const auto& seed : query.seed_keywords) {
      auto it = query.expansion.find(seed);
      if (it == query.expansion.end()) continue;  // skipped seed
      std::snprintf(thr_buf, sizeof thr_buf, "%.6f", query.effective_threshold.at(seed));
      for (const auto& n : it->second) {
        std::snprintf(sim_buf, sizeof sim_buf, "%.6f", n.sim);
        row[0] = query.issue_name;
        row[1] = seed;
        row[2] = n.term;
        row[3] = sim_buf;
        row[4] = thr_buf;
        csv_write_row(out, row);
      }
    }
  }
}

void write_assignments_csv(const std::filesystem::path& path, const Corpus& corpus,
                           const std::vector<IssueAssignment>& assignments,
                           const std::string& column_name) {
  if (assignments.size() != corpus.comments.size()) {
    throw Error(Error::Kind::Data, "assignments do not cover the corpus");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  std::vector<std::string> header = {"comment_id",       "text",  "source_file",
                                     "year",             "month", "participant_name",
                                     "participant_org",  "multi_org", column_name};
  csv_write_row(out, header);
  std::vector<std::string> row(9);
  for (std::size_t i = 0; i < corpus.comments.size(); ++i) {
    const Comment& c = corpus.comments[i];
    const IssueAssignment& a = assignments[i];
    if (a.comment_id != c.comment_id) {
      throw Error(Error::Kind::Data, "assignment order does not match corpus order");
    }
    std::string issues;
    for (const auto& [issue, terms] : a.matched_terms) {
      (void)terms;
      if (!issues.empty()) issues.push_back(';');
      issues += issue;
    }
    std::string multi;
    for (std::size_t k = 0; k < c.multi_org.size(); ++k) {
      if (k) multi.push_back(';');
      multi += c.multi_org[k];
    }
    row[0] = std::to_string(c.comment_id);
    row[1] = c.text;
    row[2] = c.source_file;
    row[3] = std::to_string(c.year);
    row[4] = std::to_string(c.month);
    row[5] = c.participant_name;
    row[6] = c.participant_org;
    row[7] = multi;
    row[8] = issues;
    csv_write_row(out, row);
  }
}

}  // namespace dialoscope
