#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialoscope/corpus.hpp"

namespace dialoscope {

/// One raw session-note document.
struct RawNote {
  std::string source_name;
  int session_year = 0;
  int session_month = 0;
  std::string body;
};

/// Speaker-turn grammar. The defaults parse notes shaped like
///
///   - Speaker Name: head of the turn...
///    - continuation bullet
///    - another continuation bullet
///   - Next Speaker: ...
///
/// i.e. a speaker turn is a bullet at indentation <= max_speaker_indent whose
/// content starts with `Name:`; deeper bullets continue the current turn.
/// `Name1 + Name2:` marks a statement shared by several parties. An optional
/// `Name (Org):` form names the organisation explicitly; otherwise the
/// organisation is the alias-canonicalised speaker name.
struct NoteStyle {
  std::vector<std::string> bullet_markers = {"-", "*", "•"};
  int tab_width = 4;
  int max_speaker_indent = 0;
  std::string multi_party_separator = "+";
  std::size_t max_speaker_name_len = 64;
  /// Lines matching any of these (ECMAScript regex, whole line) are dropped
  /// as non-conversational text before parsing.
  std::vector<std::string> drop_patterns = {
      R"(^\s*#.*$)",                    // markdown-style headings
      R"(^\s*[A-Z][A-Z0-9 /&.:-]{3,}$)",  // ALL-CAPS headings
      R"(^\s*[Aa]genda\b.*$)",
  };
  bool strict = false;
};

/// Parse one note into comments. Ids are assigned sequentially starting at
/// `first_comment_id`. In lenient mode unparseable lines attach to the
/// previous comment (or are dropped when there is none) and a message is
/// appended to `warnings`; in strict mode they raise ParseError with the
/// line number.
std::vector<Comment> parse_notes(const RawNote& note,
                                 const std::map<std::string, std::string>& aliases,
                                 const std::map<std::string, std::string>& abbreviations,
                                 const NoteStyle& style,
                                 std::int64_t first_comment_id = 0,
                                 std::vector<std::string>* warnings = nullptr);

/// Year/month extraction from note file names.
struct NoteNaming {
  /// Regex searched in the file name; capture 1 = year, capture 2 = month.
  std::string pattern = R"((\d{4})[-_](\d{1,2}))";
};

/// Per-file `file,year,month` overrides for files whose names do not carry a
/// parseable date.
std::map<std::string, std::pair<int, int>> read_note_manifest(const std::filesystem::path& path);

RawNote load_note_file(const std::filesystem::path& path, const NoteNaming& naming,
                       const std::map<std::string, std::pair<int, int>>& overrides = {});

/// Corpus invariant check: no alias key may appear as a canonical value.
void validate_alias_map(const std::map<std::string, std::string>& aliases);

}  // namespace dialoscope
