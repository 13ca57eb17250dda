#pragma once

// Disjoint Korányi–Cygan ball packings of the removed cells of a carpet.
//
// Chart coordinates of a cell are the real coordinates of xi followed by v,
// so the carpet dimension equals the real dimension of the Carnot group.

#include <cstdint>
#include <vector>

#include "nilcarpet/carnot.hpp"
#include "nilcarpet/carpet.hpp"
#include "nilcarpet/hyperbolic.hpp"

namespace nilcarpet {

inline constexpr double kPackingSafety = 0.99;

/// Largest r with the rho_c ball B(center, r) inside the closed box.
/// Horizontal coordinates need r <= h_x; a vertical coordinate needs
/// max_{0<=s<=r} sqrt(r^4 - s^4) + 2|xi_c| s <= h_v, solved by bisection.
double kc_inradius(const CarnotShape& shape, const Box& box);

/// Ball at the box center with radius safety * kc_inradius.
/// Throws ErrorCode::degenerate for a box with a nonpositive half-width.
Ball inscribe_ball(const CarnotShape& shape, const Box& box, double safety = kPackingSafety);

/// Carnot point at the chart position `center` (u = 0).
CarnotPoint chart_point(const CarnotShape& shape, std::span<const double> center);

struct PackedBall {
  Ball ball;
  std::size_t cell = 0;  // index into Packing::cells
  int depth = 0;         // 0 for the main ball of its cell
  bool excluded = false;
};

struct Packing {
  CarnotShape shape;
  CarpetSpec carpet;
  int pack_depth = 0;
  std::vector<RemovedCell> cells;
  std::vector<PackedBall> balls;

  std::vector<std::size_t> excluded_indices() const;
  std::size_t active_count() const;
};

/// Greedy packing: one main ball per removed cell, then, depth by depth up
/// to pack_depth, a ball in each 2^dim coordinate sub-box whose inscribed
/// ball, shrunk away from earlier balls, keeps at least a quarter of its
/// inradius. Every accepted ball satisfies rho_c(c, c_j) > r + r_j against
/// all earlier ones.
Packing pack(const CarnotShape& shape, const CarpetSpec& carpet, int pack_depth,
             double cap = kDefaultEnumerationCap);

/// Fraction of uniform samples of the removed set (cells weighted by
/// volume) that fall in some packed ball.
McEstimate coverage_mc(const Packing& packing, std::uint64_t samples, std::uint64_t seed);

/// Copy with the given balls marked excluded. Throws
/// ErrorCode::out_of_range for an invalid index.
Packing exclude(const Packing& packing, const std::vector<std::size_t>& indices);

struct DisjointnessReport {
  std::uint64_t pairs_tested = 0;
  std::uint64_t violations = 0;
  double min_margin = 0.0;  // min rho_c(c_i, c_j) - r_i - r_j over tested pairs
};

/// Exact pairwise test rho_c(c_i, c_j) > r_i + r_j. Pairs whose first
/// coordinates already differ by more than r_i + r_j pass without a test.
DisjointnessReport check_disjointness(const std::vector<Ball>& balls);
DisjointnessReport check_disjointness(const Packing& packing);

}  // namespace nilcarpet
