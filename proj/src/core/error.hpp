#pragma once

#include <stdexcept>
#include <string>

namespace kloostlab {

enum class ErrorCode {
  kDomain,
  kNotInvertible,
  kNotCoprime,
  kNotSquarefree,
  kInfeasible,
  kParse,
  kIo,
};

const char* error_code_name(ErrorCode code);

// All recoverable failures in the library are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace kloostlab
