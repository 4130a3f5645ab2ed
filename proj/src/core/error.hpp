#pragma once

#include <stdexcept>
#include <string>

namespace scompress {

enum class ErrorCode {
  InvalidArgument,
  TypeMismatch,
  EmptySample,
  EmptyClass,
  Unrealizable,
  BudgetExceeded,
  SchemeFailure,
  AssumptionViolation,
  DecodeError,
  ConstructionError,
  GenerationError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::TypeMismatch: return "type-mismatch";
    case ErrorCode::EmptySample: return "empty-sample";
    case ErrorCode::EmptyClass: return "empty-class";
    case ErrorCode::Unrealizable: return "unrealizable";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::SchemeFailure: return "scheme-failure";
    case ErrorCode::AssumptionViolation: return "assumption-violation";
    case ErrorCode::DecodeError: return "decode-error";
    case ErrorCode::ConstructionError: return "construction-error";
    case ErrorCode::GenerationError: return "generation-error";
    case ErrorCode::IoError: return "io-error";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace scompress
