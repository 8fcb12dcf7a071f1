#include "xrsim/error.hpp"

#include <utility>

namespace xrsim {

namespace {

std::string format_message(const std::string& module,
                           const std::string& operation,
                           const std::string& field,
                           const std::string& detail) {
  std::string msg = module + "." + operation + ": ";
  if (!field.empty()) msg += field + ": ";
  return msg + detail;
}

}  // namespace

Error::Error(std::string module, std::string operation, std::string field,
             const std::string& detail)
    : std::runtime_error(format_message(module, operation, field, detail)),
      module_(std::move(module)),
      operation_(std::move(operation)),
      field_(std::move(field)) {}

ParseError::ParseError(std::string module, std::string operation,
                       std::string field, const std::string& detail,
                       std::size_t line, std::size_t column)
    : Error(std::move(module), std::move(operation), std::move(field),
            line > 0 ? detail + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"
                     : detail),
      line_(line),
      column_(column) {}

}  // namespace xrsim
