#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dialoscope {

/// Strip non-informative Unicode from note text:
///  - control characters (Cc) except newline and tab; CR/CRLF normalize to LF
///  - format characters (Cf): soft hyphen, zero-width and directional marks,
///    BOM, and the rest of the category
///  - curly quotes and dash variants normalize to their ASCII forms,
///    no-break space to a plain space
/// Everything else (including non-ASCII letters) passes through unchanged,
/// as do bytes that do not form valid UTF-8.
std::string clean_text(std::string_view raw);

/// Whitespace-separated token count. Used consistently for all activity
/// (words-per-issue, per-party) reports.
std::size_t word_count(std::string_view text);

class StopwordSet {
public:
  StopwordSet() = default;

  /// The bundled English list (also shipped verbatim as data/stopwords_en.txt).
  static const StopwordSet& builtin();

  /// One token per line; blank lines ignored; tokens lowercased.
  static StopwordSet from_file(const std::filesystem::path& path);

  static StopwordSet none() { return StopwordSet(); }

  bool contains(std::string_view token) const {
    return words_.find(std::string(token)) != words_.end();
  }
  std::size_t size() const { return words_.size(); }
  void insert(std::string token) { words_.insert(std::move(token)); }

private:
  std::unordered_set<std::string> words_;
};

/// Lowercase and split on non-alphanumeric characters (bytes >= 0x80 count as
/// word characters so accented terms survive), then drop stopwords.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

}  // namespace dialoscope
