#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dialoscope/corpus.hpp"
#include "dialoscope/embedding.hpp"

namespace dialoscope {

/// A predefined issue: a name plus seed keywords. Seeds are lowercase and
/// unique within the issue; multiword seeds are allowed and match as
/// contiguous token sequences.
struct IssueSpec {
  std::string issue_name;
  std::vector<std::string> seed_keywords;
};

/// Issue file: CSV `issue_name,seed_keywords` with `;`-separated seeds.
std::vector<IssueSpec> read_issue_specs(const std::filesystem::path& path);

struct ExpandedQuery {
  std::string issue_name;
  std::vector<std::string> seed_keywords;
  /// seed -> near terms, descending similarity; the seed itself leads with
  /// similarity exactly 1.0.
  std::map<std::string, std::vector<Neighbor>> expansion;
  std::map<std::string, double> effective_threshold;
  /// Seeds with no representable word, skipped with a warning.
  std::vector<std::string> skipped_seeds;
};

struct ExpandOptions {
  double base_sim = 0.4;
  double max_sim = 0.6;
  std::size_t overflow_count = 1000;
  /// Linear threshold-raising step applied while the neighborhood stays
  /// larger than overflow_count.
  double step = 0.05;
};

/// Expand each seed through its embedding neighborhood. Starting at base_sim,
/// the threshold rises by `step` while more than overflow_count terms
/// qualify, capping at max_sim where the list truncates to the strongest
/// overflow_count terms. Multiword seeds are embedded as the mean of their
/// in-vocabulary word vectors.
ExpandedQuery expand_query(const EmbeddingTable& table, const IssueSpec& spec,
                           const ExpandOptions& options = {});

/// Multi-label tag of one comment.
struct IssueAssignment {
  std::int64_t comment_id = 0;
  /// issue -> expansion terms found in the comment (keys are exactly the
  /// assigned issues; empty map = unassigned comment).
  std::map<std::string, std::set<std::string>> matched_terms;

  std::set<std::string> issue_names() const {
    std::set<std::string> names;
    for (const auto& [issue, terms] : matched_terms) {
      (void)terms;
      names.insert(issue);
    }
    return names;
  }
};

enum class QueryMode {
  PerTerm,   // report which individual seed triggered each assignment
  Combined,  // union of all seeds' expansions per issue (the default)
};

struct ClassifierConfig {
  QueryMode mode = QueryMode::Combined;
};

/// Validate the mode and build a classifier configuration.
ClassifierConfig combine_modes(const std::vector<ExpandedQuery>& queries, QueryMode mode);

struct TriggerRecord {
  std::int64_t comment_id;
  std::string issue;
  std::string seed;
  std::string matched_term;
};

struct ClassifyResult {
  std::vector<IssueAssignment> assignments;   // one per comment, corpus order
  std::vector<TriggerRecord> triggers;        // per-term mode only
};

ClassifyResult run_classifier(const Corpus& corpus, const std::vector<ExpandedQuery>& queries,
                              const ClassifierConfig& config, const StopwordSet& stopwords);

/// Combined-mode classification: a comment belongs to an issue iff any of its
/// tokens (or contiguous token sequences for multiword terms) is a seed or
/// near term of that issue.
std::vector<IssueAssignment> classify_predefined(const Corpus& corpus,
                                                 const std::vector<ExpandedQuery>& queries,
                                                 const StopwordSet& stopwords);

/// Expansion report CSV: `issue,seed,near_term,sim,effective_threshold`.
void write_expansion_report(const std::filesystem::path& path,
                            const std::vector<ExpandedQuery>& queries);

/// Corpus CSV augmented with an `issues` column (`;`-joined issue names).
void write_assignments_csv(const std::filesystem::path& path, const Corpus& corpus,
                           const std::vector<IssueAssignment>& assignments,
                           const std::string& column_name = "issues");

}  // namespace dialoscope
