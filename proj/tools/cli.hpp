#pragma once

// Command-line front end. Kept as a library so tests can drive it without
// spawning a process.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nilcarpet/artifacts.hpp"

namespace nilcarpet::cli {

/// A coordinate 2-plane of the chart x1..x_dim, x_{dim+1} = u. Coordinates
/// not named are free, except u, which is pinned to 0 unless given. Exactly
/// two coordinates must end up free.
struct PlaneSpec {
  std::vector<std::optional<double>> fixed;  // size dim + 1; empty = free
  std::array<std::size_t, 2> free{};         // horizontal, vertical axis
};

/// Grammar: comma-separated "xK=value" or "xK=*". Throws
/// ErrorCode::invalid_argument for an unknown or malformed plane.
PlaneSpec parse_plane(const std::string& text, int dim);

/// Binary P6 with the config hash in a comment. Carpet dark, removed cells
/// light, ball outlines blue, excluded balls red.
std::string render_ppm(const Construction& c, const PlaneSpec& plane, int res);

/// Comma-separated t, t1, equiv_dev, ell_ij, ell_err, one row per t.
std::string sweep_csv(const Construction& c, const std::vector<double>& ts);

/// Parses argv and runs one verb. Returns the exit status: 0 success,
/// 1 validation, 2 computation failure, 3 I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nilcarpet::cli
