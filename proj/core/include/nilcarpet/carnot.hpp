#pragma once

// The Carnot group F^{n-1} x Im F at infinity and its extension to the
// half-space model in horospherical coordinates (xi, v, u).

#include <span>
#include <vector>

#include "nilcarpet/algebra.hpp"

namespace nilcarpet {

/// Algebra and hyperbolic dimension n; fixes every coordinate count.
struct CarnotShape {
  Algebra algebra = Algebra::Real;
  int n = 2;

  int horizontal_dim() const noexcept { return (n - 1) * real_dim(algebra); }
  int vertical_dim() const noexcept { return imag_dim(algebra); }
  /// Real dimension of the Carnot group (boundary minus a point).
  int dim() const noexcept { return horizontal_dim() + vertical_dim(); }
  std::size_t xi_size() const noexcept { return static_cast<std::size_t>(n - 1); }

  friend bool operator==(const CarnotShape&, const CarnotShape&) = default;
};

struct CarnotPoint {
  FVector xi;
  ImScalar v;

  static CarnotPoint identity(const CarnotShape& shape);
  CarnotShape shape() const noexcept;
};

struct HalfSpacePoint {
  FVector xi;
  ImScalar v;
  double u = 0.0;

  static HalfSpacePoint origin(const CarnotShape& shape);
  static HalfSpacePoint at(const CarnotPoint& base, double u = 0.0);
  CarnotPoint base() const { return {xi, v}; }
  bool on_boundary() const noexcept { return u == 0.0; }
  CarnotShape shape() const noexcept;
};

CarnotPoint group_mul(const CarnotPoint& a, const CarnotPoint& b);
CarnotPoint group_inv(const CarnotPoint& a);

/// Left translation T_g acting on the half-space; the height is unchanged.
HalfSpacePoint translate(const CarnotPoint& g, const HalfSpacePoint& p);

/// Carnot dilation D_lambda: (lambda xi, lambda v conj(lambda), |lambda|^2 u).
/// For commutative algebras the vertical part is |lambda|^2 v.
HalfSpacePoint dilate(const Scalar& lambda, const HalfSpacePoint& p);
HalfSpacePoint dilate(double lambda, const HalfSpacePoint& p);

/// Korányi–Cygan gauge | |xi|^2 + u - v |^(1/2).
double kc_norm(const HalfSpacePoint& p);
double kc_norm(const CarnotPoint& p);

/// Korányi–Cygan distance rho_c extended to the half-space.
double kc_dist(const HalfSpacePoint& p, const HalfSpacePoint& q);
double kc_dist(const CarnotPoint& p, const CarnotPoint& q);

/// Flattened chart coordinates: real parts of xi, then v, then u.
std::vector<double> to_chart(const HalfSpacePoint& p);
HalfSpacePoint from_chart(const CarnotShape& shape, std::span<const double> chart);

/// Euclidean distance between chart coordinate vectors. Used for numerical
/// identity checks, where rho_c would amplify vertical rounding to sqrt(eps).
double chart_distance(const HalfSpacePoint& p, const HalfSpacePoint& q);

}  // namespace nilcarpet
