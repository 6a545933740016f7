#include "dialoscope/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dialoscope/csv.hpp"
#include "dialoscope/errors.hpp"

namespace dialoscope {

namespace {

const std::vector<std::string> kCorpusHeader = {
    "comment_id", "text",           "source_file",     "year",
    "month",      "participant_name", "participant_org", "multi_org"};

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Int>
Int parse_int(const std::string& s, std::size_t row, const char* column) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("corpus: non-integer value '" + s + "' in column " + column, row);
  }
  return value;
}

}  // namespace

Corpus filter_corpus(const Corpus& corpus, const CorpusFilter& filter) {
  Corpus out;
  out.entity_aliases = corpus.entity_aliases;
  out.abbreviations = corpus.abbreviations;
  for (const Comment& c : corpus.comments) {
    if (filter.exclude_multi_org && !c.multi_org.empty()) continue;
    if (filter.parties) {
      bool match = std::find(filter.parties->begin(), filter.parties->end(),
                             c.participant_org) != filter.parties->end();
      if (!match) {
        for (const auto& org : c.multi_org) {
          if (std::find(filter.parties->begin(), filter.parties->end(), org) !=
              filter.parties->end()) {
            match = true;
            break;
          }
        }
      }
      if (!match) continue;
    }
    if (filter.years &&
        std::find(filter.years->begin(), filter.years->end(), c.year) == filter.years->end())
      continue;
    if (filter.months &&
        std::find(filter.months->begin(), filter.months->end(), c.month) == filter.months->end())
      continue;
    out.comments.push_back(c);
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Kind::Io, "cannot write " + path.string());
  csv_write_row(out, kCorpusHeader);
  std::vector<std::string> row(8);
  for (const Comment& c : corpus.comments) {
    row[0] = std::to_string(c.comment_id);
    row[1] = c.text;
    row[2] = c.source_file;
    row[3] = std::to_string(c.year);
    row[4] = std::to_string(c.month);
    row[5] = c.participant_name;
    row[6] = c.participant_org;
    row[7] = join(c.multi_org, ';');
    csv_write_row(out, row);
  }
  if (!out) throw Error(Error::Kind::Io, "write failed for " + path.string());
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot open " + path.string());
  CsvReader reader(in);
  auto header = reader.next_row();
  if (!header || *header != kCorpusHeader) {
    throw Error(Error::Kind::Parse,
                "corpus: bad header in " + path.string() + " (expected `" +
                    join(kCorpusHeader, ',') + "`)");
  }
  Corpus corpus;
  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() != kCorpusHeader.size()) {
      throw ParseError("corpus: expected " + std::to_string(kCorpusHeader.size()) +
                           " columns, got " + std::to_string(row->size()),
                       reader.row_line());
    }
    Comment c;
    c.comment_id = parse_int<std::int64_t>((*row)[0], reader.row_line(), "comment_id");
    c.text = (*row)[1];
    c.source_file = (*row)[2];
    c.year = parse_int<int>((*row)[3], reader.row_line(), "year");
    c.month = parse_int<int>((*row)[4], reader.row_line(), "month");
    c.participant_name = (*row)[5];
    c.participant_org = (*row)[6];
    c.multi_org = split((*row)[7], ';');
    corpus.comments.push_back(std::move(c));
  }
  return corpus;
}

std::map<std::string, std::string> read_alias_map(const std::filesystem::path& path) {
  std::map<std::string, std::string> map;
  auto rows = read_csv_file(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 2) {
      throw Error(Error::Kind::Parse, "alias map " + path.string() + ": row " +
                                          std::to_string(i + 1) + " needs 2 columns");
    }
    if (i == 0 && row[0] == "variant" && row[1] == "canonical") continue;
    map[row[0]] = row[1];
  }
  return map;
}

const std::string& canonical_name(const std::map<std::string, std::string>& aliases,
                                  const std::string& name) {
  auto it = aliases.find(name);
  return it == aliases.end() ? name : it->second;
}

}  // namespace dialoscope
