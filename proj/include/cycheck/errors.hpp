#pragma once

#include <stdexcept>
#include <string>

namespace cycheck {

/// Caller broke an operation's precondition (unknown edge endpoint, vector
/// length mismatch, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured capacity (vertex cap, edge cap, oracle size limit) was hit.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DiagCode {
  syntax_error,
  unknown_identifier,
  type_mismatch,
  duplicate_name,
  property_restriction,  // property process with sync or effects
  range_error,
};

const char* diag_code_name(DiagCode code);

/// Parse/validation diagnostic with source position (1-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(DiagCode code, int line, int col, const std::string& message);

  DiagCode code() const { return code_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  DiagCode code_;
  int line_;
  int col_;
};

/// Runtime modeling error (range violation, division by zero) raised while
/// computing successors. Carries the serialized offending state.
class ModelRuntimeError : public std::runtime_error {
 public:
  ModelRuntimeError(const std::string& message, std::string state_bytes)
      : std::runtime_error(message), state_bytes_(std::move(state_bytes)) {}

  const std::string& state_bytes() const { return state_bytes_; }

 private:
  std::string state_bytes_;
};

}  // namespace cycheck
