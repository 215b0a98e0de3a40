#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace argelicit {

enum class ErrorCode {
  kMalformedInput,
  kInvalidInterval,
  kInvalidCost,
  kInvalidWeight,
  kUnknownArgument,
  kDuplicateArgument,
  kDuplicateAttack,
  kNonConvergence,
  kIrrationalInput,
  kAlreadyRational,
  kInfeasible,
  kLimitExceeded,
  kInvalidParameter,
  kIo,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput: return "malformed_input";
    case ErrorCode::kInvalidInterval: return "invalid_interval";
    case ErrorCode::kInvalidCost: return "invalid_cost";
    case ErrorCode::kInvalidWeight: return "invalid_weight";
    case ErrorCode::kUnknownArgument: return "unknown_argument";
    case ErrorCode::kDuplicateArgument: return "duplicate_argument";
    case ErrorCode::kDuplicateAttack: return "duplicate_attack";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kIrrationalInput: return "irrational_input";
    case ErrorCode::kAlreadyRational: return "already_rational";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kLimitExceeded: return "limit_exceeded";
    case ErrorCode::kInvalidParameter: return "invalid_parameter";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

// Every domain failure in the library is reported through this type. The
// offending argument id is attached when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string argument = {})
      : std::runtime_error(argument.empty() ? message
                                            : message + " (argument '" + argument + "')"),
        code_(code),
        argument_(std::move(argument)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& argument() const noexcept { return argument_; }

 private:
  ErrorCode code_;
  std::string argument_;
};

// Raised by the fixed-point solver; carries the last L-infinity change.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual, int iterations)
      : Error(ErrorCode::kNonConvergence, message),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace argelicit
