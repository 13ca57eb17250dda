#pragma once

// The stretch homeomorphism f_t of the boundary: slope 1 over the gap set
// Delta_1 and slope t over the carpet projection, applied to the first real
// coordinate only.
//
// psi_t(x) = x + (t - 1) L(x), where L(x) is the signed measure of
// [0, x] \ Delta_1. L is constant on each gap component, so on the column of
// a removed cell psi_t is x + c with c taken from the same stored sum, and
// psi_1 is the identity bit for bit.

#include <cstdint>
#include <vector>

#include "nilcarpet/carnot.hpp"
#include "nilcarpet/carpet.hpp"

namespace nilcarpet {

class StretchMap {
 public:
  /// Throws ErrorCode::invalid_argument unless t > 0 and the gaps lie in
  /// [-1/2, 1/2].
  StretchMap(double t, IntervalSet delta1);
  static StretchMap from_carpet(const CarpetSpec& spec, double t);

  double t() const noexcept { return t_; }
  const IntervalSet& delta1() const noexcept { return delta1_; }

  /// 1 on Delta_1, t elsewhere.
  double phi(double y) const;
  double psi(double x) const;
  /// Inverse of psi on [psi(-1/2), psi(1/2)].
  double psi_inverse(double y) const;
  /// Signed carpet-projection measure of [0, x].
  double carpet_measure_to(double x) const;

  /// psi(1/2) - psi(-1/2).
  double t1() const;

  /// f_t: replaces the first real coordinate x_1 by psi(x_1).
  /// Throws ErrorCode::out_of_range when |x_1| > 1/2.
  HalfSpacePoint apply(const HalfSpacePoint& p) const;

  /// Shift c with psi(x) = x + c on the projection of a removed cell. Throws
  /// ErrorCode::inconsistent when the projection is not inside one gap.
  double cell_translation(const Box& cell_box) const;

  /// Forward difference (psi(x + h) - psi(x)) / h.
  double local_slope(double x, double h = 1e-6) const;

 private:
  double t_;
  IntervalSet delta1_;
  // Carpet-projection pieces on each side of 0, ordered outward from 0, with
  // running totals: pos_cum_[i] = measure of pos_[0..i).
  std::vector<Interval> pos_;
  std::vector<Interval> neg_;
  std::vector<double> pos_cum_;
  std::vector<double> neg_cum_;
};

struct DistortionReport {
  std::uint64_t pairs = 0;
  double min_ratio = 0.0;  // min rho_c(f p, f q) / rho_c(p, q)
  double max_ratio = 0.0;
  double bound = 0.0;      // max(1,t)/min(1,t)
};

/// Empirical rho_c distortion of f_t on random boundary pairs in the
/// fundamental column.
DistortionReport measure_distortion(const StretchMap& map, const CarnotShape& shape,
                                    std::uint64_t pairs, std::uint64_t seed);

}  // namespace nilcarpet
