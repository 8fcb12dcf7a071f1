#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xrsim {

// Base of every error raised by the library. The message always carries
// "<module>.<operation>: <field>: <detail>" so a failing run can be traced
// to the offending input without a debugger.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string operation, std::string field,
        const std::string& detail);

  const std::string& module() const { return module_; }
  const std::string& operation() const { return operation_; }
  const std::string& field() const { return field_; }

 private:
  std::string module_;
  std::string operation_;
  std::string field_;
};

// Malformed input text (JSON syntax, CSV rows).
class ParseError : public Error {
 public:
  ParseError(std::string module, std::string operation, std::string field,
             const std::string& detail, std::size_t line = 0,
             std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that violates a domain invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad command line or unreadable input file.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace xrsim
