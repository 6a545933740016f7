#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dialoscope {

// Minimal RFC-4180 reader/writer. Fields containing comma, quote, CR or LF
// are quoted on write; embedded quotes are doubled. The reader accepts both
// LF and CRLF record separators and supports newlines inside quoted fields.

/// Quote `field` if needed so it can be embedded in a CSV record.
std::string csv_escape(std::string_view field);

void csv_write_row(std::ostream& out, std::span<const std::string> fields);

class CsvReader {
public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Throws ParseError on a quoting
  /// error. Blank lines between records are skipped.
  std::optional<std::vector<std::string>> next_row();

  /// 1-based line number where the last returned record started.
  std::size_t row_line() const { return row_line_; }

private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t row_line_ = 0;
};

std::vector<std::vector<std::string>> read_csv_file(const std::filesystem::path& path);

}  // namespace dialoscope
