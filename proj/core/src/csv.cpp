#include "dialoscope/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "dialoscope/errors.hpp"

namespace dialoscope {

std::string csv_escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void csv_write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(',');
    out << csv_escape(fields[i]);
  }
  out.put('\n');
}

std::optional<std::vector<std::string>> CsvReader::next_row() {
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return std::nullopt;

  ++line_;
  row_line_ = line_;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;

  while (true) {
    if (c == std::char_traits<char>::eof()) {
      if (in_quotes) throw ParseError("unterminated quoted field", row_line_);
      fields.push_back(std::move(field));
      return fields;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        int next = in_.peek();
        if (next == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
    } else if (ch == '"') {
      if (!field.empty())
        throw ParseError("quote inside unquoted field", line_);
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      // swallow; the following \n (if any) ends the record
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return fields;
    } else {
      field.push_back(ch);
    }
    c = in_.get();
  }
}

std::vector<std::vector<std::string>> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Kind::Io, "cannot open " + path.string());
  CsvReader reader(in);
  std::vector<std::vector<std::string>> rows;
  while (auto row = reader.next_row()) {
    // skip records that are a single empty field (blank lines)
    if (row->size() == 1 && (*row)[0].empty()) continue;
    rows.push_back(std::move(*row));
  }
  return rows;
}

}  // namespace dialoscope
