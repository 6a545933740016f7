#include "dialoscope/notes.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "dialoscope/csv.hpp"
#include "dialoscope/errors.hpp"
#include "dialoscope/text.hpp"

namespace dialoscope {

namespace {

std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

/// Whole-token abbreviation expansion, single left-to-right pass; the
/// replacement text is never re-scanned.
std::string expand_abbreviations(const std::string& text,
                                 const std::map<std::string, std::string>& abbrevs) {
  if (abbrevs.empty()) return text;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool replaced = false;
    bool at_boundary = i == 0 || !is_word_char(static_cast<unsigned char>(text[i - 1]));
    if (at_boundary) {
      for (const auto& [abbr, expansion] : abbrevs) {
        if (abbr.empty() || text.compare(i, abbr.size(), abbr) != 0) continue;
        std::size_t end = i + abbr.size();
        if (end < text.size() && is_word_char(static_cast<unsigned char>(text[end]))) continue;
        out += expansion;
        i = end;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

struct Line {
  std::size_t number;   // 1-based in the cleaned body
  int indent;           // leading whitespace, tabs expanded
  bool is_bullet;
  std::string content;  // text after the bullet marker (or the whole line)
};

Line classify_line(const std::string& raw, std::size_t number, const NoteStyle& style) {
  Line line;
  line.number = number;
  int indent = 0;
  std::size_t i = 0;
  while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
    indent += raw[i] == '\t' ? style.tab_width : 1;
    ++i;
  }
  line.indent = indent;
  line.is_bullet = false;
  std::string rest = raw.substr(i);
  for (const auto& marker : style.bullet_markers) {
    if (rest.size() > marker.size() && rest.compare(0, marker.size(), marker) == 0 &&
        (rest[marker.size()] == ' ' || rest[marker.size()] == '\t')) {
      line.is_bullet = true;
      line.content = strip(rest.substr(marker.size() + 1));
      return line;
    }
  }
  line.content = strip(rest);
  return line;
}

struct SpeakerHead {
  std::string name;             // full head before ':'
  std::optional<std::string> org;  // from a trailing "(Org)" if present
  std::string text;             // after ':'
};

std::optional<SpeakerHead> match_speaker_head(const std::string& content,
                                              const NoteStyle& style) {
  std::size_t colon = content.find(':');
  if (colon == std::string::npos || colon == 0) return std::nullopt;
  if (colon > style.max_speaker_name_len) return std::nullopt;
  std::string name = strip(content.substr(0, colon));
  if (name.empty()) return std::nullopt;
  bool has_letter = std::any_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalpha(c) || c >= 0x80;
  });
  if (!has_letter) return std::nullopt;

  SpeakerHead head;
  head.text = strip(content.substr(colon + 1));
  if (name.back() == ')') {
    std::size_t open = name.rfind('(');
    if (open != std::string::npos && open > 0) {
      head.org = strip(name.substr(open + 1, name.size() - open - 2));
      name = strip(name.substr(0, open));
    }
  }
  head.name = name;
  return head;
}

// Split `Name1 + Name2` heads; the separator must stand alone between spaces.
std::vector<std::string> split_parties(const std::string& name, const std::string& sep) {
  std::vector<std::string> parts;
  if (sep.empty()) {
    parts.push_back(name);
    return parts;
  }
  const std::string needle = " " + sep + " ";
  std::size_t start = 0;
  while (true) {
    std::size_t pos = name.find(needle, start);
    if (pos == std::string::npos) break;
    parts.push_back(strip(name.substr(start, pos - start)));
    start = pos + needle.size();
  }
  parts.push_back(strip(name.substr(start)));
  parts.erase(std::remove_if(parts.begin(), parts.end(),
                             [](const std::string& p) { return p.empty(); }),
              parts.end());
  if (parts.empty()) parts.push_back(strip(name));
  return parts;
}

}  // namespace

std::vector<Comment> parse_notes(const RawNote& note,
                                 const std::map<std::string, std::string>& aliases,
                                 const std::map<std::string, std::string>& abbreviations,
                                 const NoteStyle& style, std::int64_t first_comment_id,
                                 std::vector<std::string>* warnings) {
  if (note.body.empty()) throw Error(Error::Kind::Data, "note body is empty: " + note.source_name);
  if (note.session_month < 1 || note.session_month > 12) {
    throw Error(Error::Kind::Data,
                "note " + note.source_name + ": month out of range: " +
                    std::to_string(note.session_month));
  }

  std::vector<std::regex> drop;
  drop.reserve(style.drop_patterns.size());
  for (const auto& p : style.drop_patterns) drop.emplace_back(p);

  auto warn = [&](std::size_t line_no, const std::string& what) {
    if (warnings) {
      warnings->push_back(note.source_name + ":" + std::to_string(line_no) + ": " + what);
    }
  };

  std::string cleaned = clean_text(note.body);
  std::vector<Comment> comments;
  Comment* current = nullptr;

  auto finalize = [&]() {
    // Drop turns whose text cleaned away entirely.
    comments.erase(std::remove_if(comments.begin(), comments.end(),
                                  [](const Comment& c) { return c.text.empty(); }),
                   comments.end());
    for (std::size_t i = 0; i < comments.size(); ++i) {
      comments[i].comment_id = first_comment_id + static_cast<std::int64_t>(i);
      comments[i].text = expand_abbreviations(comments[i].text, abbreviations);
    }
  };

  std::istringstream body(cleaned);
  std::string raw_line;
  std::size_t line_no = 0;
  while (std::getline(body, raw_line)) {
    ++line_no;
    if (strip(raw_line).empty()) continue;
    bool dropped = false;
    for (const auto& re : drop) {
      if (std::regex_match(raw_line, re)) {
        dropped = true;
        break;
      }
    }
    if (dropped) continue;

    Line line = classify_line(raw_line, line_no, style);
    if (line.content.empty()) continue;

    bool speaker_position = line.is_bullet && line.indent <= style.max_speaker_indent;
    if (speaker_position) {
      if (auto head = match_speaker_head(line.content, style)) {
        Comment c;
        c.text = head->text;
        c.source_file = note.source_name;
        c.year = note.session_year;
        c.month = note.session_month;
        c.participant_name = head->name;
        std::vector<std::string> parties = split_parties(head->name, style.multi_party_separator);
        std::vector<std::string> canon;
        canon.reserve(parties.size());
        for (const auto& p : parties) canon.push_back(canonical_name(aliases, p));
        if (head->org) {
          c.participant_org = canonical_name(aliases, *head->org);
        } else {
          c.participant_org = canon.front();
        }
        if (canon.size() > 1) c.multi_org = std::move(canon);
        comments.push_back(std::move(c));
        current = &comments.back();
        continue;
      }
      // bullet in speaker position without a `Name:` head
      if (style.strict) {
        throw ParseError("note " + note.source_name + ": unparseable speaker line", line_no);
      }
      warn(line_no, "unparseable speaker line attached to previous comment");
      // fall through to continuation handling
    }

    // continuation bullet or wrapped line
    if (current) {
      if (!current->text.empty()) current->text.push_back('\n');
      current->text += line.content;
    } else if (style.strict) {
      throw ParseError("note " + note.source_name + ": text before first speaker line", line_no);
    } else {
      warn(line_no, "text before first speaker line dropped");
    }
  }

  finalize();
  return comments;
}

std::map<std::string, std::pair<int, int>> read_note_manifest(const std::filesystem::path& path) {
  std::map<std::string, std::pair<int, int>> out;
  auto rows = read_csv_file(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 3) {
      throw Error(Error::Kind::Parse,
                  "note manifest " + path.string() + ": row " + std::to_string(i + 1) +
                      " needs 3 columns (file,year,month)");
    }
    if (i == 0 && row[0] == "file") continue;
    try {
      out[row[0]] = {std::stoi(row[1]), std::stoi(row[2])};
    } catch (const std::exception&) {
      throw Error(Error::Kind::Parse, "note manifest " + path.string() + ": bad year/month for " +
                                          row[0]);
    }
  }
  return out;
}

RawNote load_note_file(const std::filesystem::path& path, const NoteNaming& naming,
                       const std::map<std::string, std::pair<int, int>>& overrides) {
  RawNote note;
  note.source_name = path.filename().string();

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot open note " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  note.body = buf.str();

  if (auto it = overrides.find(note.source_name); it != overrides.end()) {
    note.session_year = it->second.first;
    note.session_month = it->second.second;
    return note;
  }
  std::smatch m;
  std::regex re(naming.pattern);
  if (!std::regex_search(note.source_name, m, re) || m.size() < 3) {
    throw Error(Error::Kind::Config,
                "cannot extract year/month from file name '" + note.source_name +
                    "' with pattern '" + naming.pattern + "' and no manifest override");
  }
  note.session_year = std::stoi(m[1].str());
  note.session_month = std::stoi(m[2].str());
  return note;
}

void validate_alias_map(const std::map<std::string, std::string>& aliases) {
  for (const auto& [variant, canonical] : aliases) {
    (void)variant;
    if (aliases.count(canonical)) {
      throw Error(Error::Kind::Data, "alias map: canonical value '" + canonical +
                                         "' is itself an alias key");
    }
  }
}

}  // namespace dialoscope
