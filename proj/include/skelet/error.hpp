#pragma once

#include <stdexcept>
#include <string>

namespace skelet {

enum class ErrorCode {
  invalid_argument = 1,
  non_finite,
  out_of_range,
  rank_deficient,
  not_converged,
  parse,
  io,
  too_large,
};

/// Exception carrying one of the library error codes. The C API maps these
/// one-to-one onto `skelet_status` values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) fail(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace skelet
