#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pps {

enum class ErrorCode {
  DuplicateEntry,
  IndexOutOfRange,
  DimensionMismatch,
  BreakdownBeforeOneStep,
  DegreeOverflow,
  NonFiniteValue,
  SizeGuardExceeded,
  NonFiniteDual,
  NonPositiveEstimate,
  NonTermination,
  DegenerateGMM,
  EmptyInput,
  SupportViolation,
  NoConvergence,
  InvalidArgument,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

// Numerical failures map to CLI exit code 3, everything else to 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace pps
