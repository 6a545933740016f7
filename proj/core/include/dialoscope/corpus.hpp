#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dialoscope {

/// One participant utterance, the row unit of the canonical corpus file.
struct Comment {
  std::int64_t comment_id = 0;
  std::string text;
  std::string source_file;
  int year = 0;
  int month = 0;  // 1-12
  std::string participant_name;
  std::string participant_org;
  /// Non-empty iff the statement was shared by several parties.
  std::vector<std::string> multi_org;

  bool operator==(const Comment&) const = default;
};

struct Corpus {
  std::vector<Comment> comments;
  /// variant spelling -> canonical org/participant name
  std::map<std::string, std::string> entity_aliases;
  /// abbreviation -> expansion (applied token-wise to comment text)
  std::map<std::string, std::string> abbreviations;
};

struct CorpusFilter {
  std::optional<std::vector<std::string>> parties;  // matches participant_org or any multi_org
  std::optional<std::vector<int>> years;
  std::optional<std::vector<int>> months;
  bool exclude_multi_org = false;
};

/// Keep comments matching all provided criteria; order preserved.
Corpus filter_corpus(const Corpus& corpus, const CorpusFilter& filter);

/// Canonical corpus file: UTF-8 CSV, header
/// `comment_id,text,source_file,year,month,participant_name,participant_org,multi_org`,
/// multi_org `;`-joined, RFC-4180 quoting.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus(const std::filesystem::path& path);

/// Two-column CSV `variant,canonical`; a header row is optional and detected.
std::map<std::string, std::string> read_alias_map(const std::filesystem::path& path);

/// Canonical name for `name` under `aliases` (identity when unmapped).
const std::string& canonical_name(const std::map<std::string, std::string>& aliases,
                                  const std::string& name);

}  // namespace dialoscope
