#include "cycheck/errors.hpp"

namespace cycheck {

const char* diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::syntax_error: return "syntax";
    case DiagCode::unknown_identifier: return "unknown-identifier";
    case DiagCode::type_mismatch: return "type-mismatch";
    case DiagCode::duplicate_name: return "duplicate-name";
    case DiagCode::property_restriction: return "property-restriction";
    case DiagCode::range_error: return "range";
  }
  return "?";
}

ParseError::ParseError(DiagCode code, int line, int col, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": error[" +
                         diag_code_name(code) + "]: " + message),
      code_(code),
      line_(line),
      col_(col) {}

}  // namespace cycheck
