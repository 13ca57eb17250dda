#include "nilcarpet/error.hpp"

namespace nilcarpet {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::algebra_mismatch: return "algebra_mismatch";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::point_at_infinity: return "point_at_infinity";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::inconsistent: return "inconsistent";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace nilcarpet
