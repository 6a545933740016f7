#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dialoscope {

/// All recoverable failures in the library are reported through Error (or a
/// subclass). `kind()` lets the CLI map failures onto exit codes without
/// string matching.
class Error : public std::runtime_error {
public:
  enum class Kind {
    Config,   // invalid configuration / missing required input
    Parse,    // malformed input file
    Data,     // semantically invalid data (duplicate ids, empty vocab, ...)
    Numeric,  // non-finite values, zero norms, dimension mismatches
    Io,       // filesystem failures
  };

  Error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Parse failure carrying the 1-based line (or CSV row) it occurred on.
class ParseError : public Error {
public:
  ParseError(std::string message, std::size_t line)
      : Error(Kind::Parse, message + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}  // namespace dialoscope
