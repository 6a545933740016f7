#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialoscope/corpus.hpp"
#include "dialoscope/embedding.hpp"

namespace dialoscope {

/// Year or year-month bucket.
struct PeriodKey {
  int year = 0;
  std::optional<int> month;

  static PeriodKey of_year(int y) { return {y, std::nullopt}; }
  static PeriodKey of_month(int y, int m) { return {y, m}; }

  bool contains(int y, int m) const { return y == year && (!month || *month == m); }
  std::string to_string() const;

  auto operator<=>(const PeriodKey&) const = default;
};

enum class PeriodGranularity { Year, YearMonth };

/// Period buckets present in the corpus, sorted.
std::vector<PeriodKey> period_buckets(const Corpus& corpus, PeriodGranularity granularity);

/// comment_id -> assigned issue names (predefined or latent).
using IssueIndex = std::map<std::int64_t, std::set<std::string>>;

/// Read an `issues`/`latent_issues` column (`;`-joined names) from an
/// augmented corpus CSV back into an issue index.
IssueIndex read_issue_column(const std::filesystem::path& path, const std::string& column);

struct PartyPosition {
  std::string party;
  std::string issue;
  PeriodKey period;
  std::vector<double> vector;
  std::size_t word_count = 0;
  std::size_t comment_count = 0;
};

struct ReferencePosition {
  enum class Kind { Average, Baseline };
  Kind kind = Kind::Average;
  std::string baseline_party;  // kind == Baseline only
  std::vector<std::string> parties_included;
  std::vector<double> vector;
};

struct ReferenceSpec {
  ReferencePosition::Kind kind = ReferencePosition::Kind::Average;
  std::string baseline_party;
  /// Whether the baseline party appears in its own report (as constant 1.0).
  bool show_baseline = true;
};

struct DistanceEntry {
  std::string party;
  std::string issue;
  PeriodKey period;
  /// nullopt = no position computable; reports render a gap, never a zero.
  std::optional<double> similarity;
  double uncertainty = 0.0;
  std::size_t word_count = 0;
};

struct DistanceReport {
  std::vector<DistanceEntry> entries;
  ReferenceSpec reference;
  std::string backend;
};

struct PairwiseMatrix {
  std::vector<std::string> parties;
  std::vector<std::vector<double>> sims;  // symmetric, unit diagonal
  std::vector<std::vector<int>> levels;   // 0 (closest) .. 3 (farthest)
  std::array<double, 3> bounds{};         // level boundaries, descending similarity
};

struct DistanceOptions {
  double fraction = 0.10;
  int n_resamples = 100;  // 0 disables uncertainty estimation
  std::uint64_t seed = 7;
  /// Token-count weighting (the default) makes a party position equal the
  /// mean over all of its contributing token/chunk representations;
  /// disable for an unweighted per-comment mean (sensitivity analysis).
  bool weight_by_tokens = true;
};

/// Token-weighted mean of the party's matching comments' document vectors.
/// Throws Error(Data) "no position computable" when nothing matches or
/// nothing is representable.
PartyPosition party_position(const Corpus& corpus, const IssueIndex& issues,
                             const EmbeddingBackend& backend, const std::string& party,
                             const std::string& issue, const PeriodKey& period,
                             bool weight_by_tokens = true);

/// Unweighted mean over party vectors (each party counts once).
ReferencePosition reference_average(const std::vector<PartyPosition>& positions);

/// Per (party, issue): cosine similarity of the party position to the
/// reference position, one period at a time; missing positions become gaps.
DistanceReport distance_lines(const Corpus& corpus, const IssueIndex& issues,
                              const EmbeddingBackend& backend,
                              const std::vector<std::string>& parties,
                              const std::vector<std::string>& issue_names,
                              const std::vector<PeriodKey>& periods,
                              const ReferenceSpec& reference,
                              const DistanceOptions& options = {});

/// Pairwise cosine similarities plus the 4-level bucketing. Default bounds
/// are equal-width bins over the observed similarity range of the matrix and
/// are always emitted with it.
PairwiseMatrix pairwise_matrix(const Corpus& corpus, const IssueIndex& issues,
                               const EmbeddingBackend& backend,
                               const std::vector<std::string>& parties,
                               const std::string& issue, const PeriodKey& period,
                               std::optional<std::array<double, 3>> bounds = std::nullopt,
                               bool weight_by_tokens = true);

/// Sample standard deviation of the similarity to `reference` when a random
/// `fraction` of the party's text is deleted, over n_resamples draws.
/// Static backends delete tokens; precomputed backends delete whole comments
/// until the fraction of tokens is reached. Throws Error(Data) "insufficient
/// data" when the position is uncomputable in more than half the resamples.
double estimate_uncertainty(const Corpus& corpus, const IssueIndex& issues,
                            const EmbeddingBackend& backend, const std::string& party,
                            const std::string& issue, const PeriodKey& period,
                            const std::vector<double>& reference, double fraction,
                            int n_resamples, std::uint64_t seed);

enum class ActivityGroupBy { Issue, IssueParty, IssuePeriod };

struct ActivityRow {
  std::string issue;
  std::string party;               // IssueParty only
  std::optional<PeriodKey> period;  // IssuePeriod only
  std::size_t word_count = 0;
  std::size_t comment_count = 0;
};

/// Word counts per group; a multi-labeled comment counts fully toward every
/// assigned issue.
std::vector<ActivityRow> activity_counts(const Corpus& corpus, const IssueIndex& issues,
                                         ActivityGroupBy group_by,
                                         PeriodGranularity granularity = PeriodGranularity::Year);

/// `party,issue,period,similarity,uncertainty,word_count,backend`; gaps leave
/// the similarity field empty.
void write_distance_report(const std::filesystem::path& path, const DistanceReport& report);
/// Matrix CSV with a trailing `bounds` sidecar row.
void write_pairwise_matrix(const std::filesystem::path& path, const PairwiseMatrix& matrix);
void write_activity_counts(const std::filesystem::path& path,
                           const std::vector<ActivityRow>& rows);

}  // namespace dialoscope
