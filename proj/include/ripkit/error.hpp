#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ripkit {

enum class ErrorCode {
  kInvalidArgument,
  kNonSymmetric,
  kNoConvergence,
  kIndexOutOfRange,
  kOverlappingSupports,
  kBudgetExceeded,
  kInvalidArity,
  kEmptyVector,
  kArityMismatch,
  kInfeasible,
  kPreconditionViolated,
  kMissingProfileEntry,
  kDegenerateNull,
  kAssertionFailure,
  kNotFound,
  kParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised before any enumeration starts; `required` is the number of support
// evaluations the request would have needed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error(ErrorCode::kBudgetExceeded,
              "enumeration requires " + std::to_string(required) +
                  " support evaluations, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace ripkit
