#pragma once

#include <stdexcept>
#include <string>

namespace nilcarpet {

enum class ErrorCode {
  invalid_argument,
  algebra_mismatch,
  dimension_mismatch,
  out_of_range,
  point_at_infinity,
  cap_exceeded,
  not_converged,
  degenerate,
  inconsistent,
  io,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library. The code lets front ends map
/// failures onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace nilcarpet
