#pragma once

// Depth-truncated fat Sierpiński carpet in the coordinate cube
// Q = {|x_i| <= 1/2} of the Carnot chart.
//
// At level j every surviving cell is split into k_j^dim equal coordinate
// sub-boxes and the interior of the central one is removed. With k_j = 3^j
// the surviving set keeps positive measure; k_j = 3 gives the classical
// measure-zero carpet.

#include <cstdint>
#include <span>
#include <vector>

namespace nilcarpet {

inline constexpr double kDefaultEnumerationCap = 1e10;
inline constexpr double kDefaultIntervalCap = 1e8;

struct CarpetSpec {
  int dim = 2;
  std::vector<int> k_seq;
  int depth = 1;

  /// k_j = base^j for j = 1..depth.
  static CarpetSpec geometric(int dim, int base, int depth);

  /// Checks dim >= 1, odd k_j >= 3 (strictly increasing or constant), and
  /// enough k_j for the depth. Depth 0 (the full cube) is accepted only
  /// when allow_depth0 is set.
  void validate(bool allow_depth0 = false) const;

  friend bool operator==(const CarpetSpec&, const CarpetSpec&) = default;
};

/// Address of a cell: per level, a multi-index in [0, k_level)^dim.
struct CellId {
  int level = 0;
  std::vector<std::int32_t> indices;  // level * dim entries, level-major

  std::span<const std::int32_t> at_level(int l, int dim) const;
  friend bool operator==(const CellId&, const CellId&) = default;
};

struct Box {
  std::vector<double> center;
  std::vector<double> half_width;

  bool contains_open(std::span<const double> x) const noexcept;
  bool contains_closed(std::span<const double> x) const noexcept;
  double volume() const noexcept;
  std::size_t dim() const noexcept { return center.size(); }
};

struct RemovedCell {
  CellId id;
  Box box;
};

/// Removed cells up to the carpet depth, ordered by level and then
/// lexicographically by address (axis 0 most significant).
/// Throws ErrorCode::cap_exceeded when prod k_j^dim exceeds `cap`.
std::vector<RemovedCell> removed_cells(const CarpetSpec& spec, double cap = kDefaultEnumerationCap);

/// Membership in the depth-D carpet by per-level index arithmetic.
/// Throws ErrorCode::out_of_range outside Q.
bool contains(const CarpetSpec& spec, std::span<const double> x);

/// prod_{j<=D} (1 - k_j^{-dim}).
double measure_exact(const CarpetSpec& spec);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

/// Fraction of uniform samples of Q that lie in the carpet. Deterministic in
/// (carpet, samples, seed), independent of thread count.
McEstimate measure_mc(const CarpetSpec& spec, std::uint64_t samples, std::uint64_t seed);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise disjoint open intervals.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Sorts and merges overlapping intervals; touching ones stay separate.
  static IntervalSet from_unsorted(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const noexcept { return iv_; }
  std::size_t size() const noexcept { return iv_.size(); }
  double measure() const noexcept;
  bool contains(double x) const noexcept;
  /// Index of the component containing x, or -1.
  int component_of(double x) const noexcept;

 private:
  std::vector<Interval> iv_;
};

/// Projection of the removed set onto the first axis, as disjoint intervals.
/// Computed by descending the first-axis subdivision; for dim >= 2 every
/// first-axis interval lies under some surviving cell. Throws
/// ErrorCode::cap_exceeded when prod k_j exceeds `cap`.
IntervalSet project_delta1(const CarpetSpec& spec, double cap = kDefaultIntervalCap);

/// 1 - prod_{j<=D} (1 - 1/k_j).
double delta1_measure_exact(const CarpetSpec& spec);

struct BoxCountFit {
  std::vector<double> log_inv_scale;
  std::vector<double> log_count;
  double dimension = 0.0;  // least-squares slope
};

/// Counts grid boxes of side 1/prod_{j<=s} k_j meeting the carpet, for
/// s = 1..levels, by membership queries at box centers, and fits the slope.
BoxCountFit box_count_dimension(const CarpetSpec& spec, int levels);

}  // namespace nilcarpet
