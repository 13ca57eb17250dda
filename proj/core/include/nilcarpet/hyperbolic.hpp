#pragma once

// F-hyperbolic space: projective model with the indefinite Hermitian form,
// transport to the half-space model, inversions in Korányi–Cygan spheres,
// isometry words and translation lengths.
//
// Projective coordinates are (y_1, ..., y_{n+1}) with
//   <<z, w>> = z_1 conj(w_1) + ... + z_n conj(w_n) - z_{n+1} conj(w_{n+1}).
// Lines are left lines {lambda z}; linear maps act on row vectors from the
// right so they commute with the scalar action.
//
// The half-space point (xi, v, u) lifts, in Siegel coordinates
// (z_0, zeta, z_n), to (-|xi|^2 - u + v, sqrt(2) xi, 1), on which the Siegel
// form z_0 conj(w_n) + z_n conj(w_0) + <zeta, omega> evaluates to -2u.
// The Cayley change y_n = (z_0 + z_n)/sqrt2, y_{n+1} = (z_n - z_0)/sqrt2
// carries it to the form above; the ball center is the lift of (0, 0, 1).

#include <optional>
#include <variant>
#include <vector>

#include "nilcarpet/algebra.hpp"
#include "nilcarpet/carnot.hpp"

namespace nilcarpet {

struct ProjectivePoint {
  Algebra algebra = Algebra::Real;
  std::vector<Scalar> homog;  // n + 1 entries

  std::size_t size() const noexcept { return homog.size(); }
};

Scalar hform(const ProjectivePoint& z, const ProjectivePoint& w);

/// Hyperbolic distance with cosh^2(d/2) = <<z,w>><<w,z>> / (<<z,z>><<w,w>>).
/// Both points must be negative lines.
double dist(const ProjectivePoint& z, const ProjectivePoint& w);

/// Same distance evaluated directly in horospherical coordinates:
/// cosh^2(d/2) = | |xi-xi'|^2 + u + u' - (v - v' + 2 Im<xi,xi'>) |^2 / (4 u u').
/// Stable for points very close to the boundary.
double dist(const HalfSpacePoint& p, const HalfSpacePoint& q);

ProjectivePoint ball_from_halfspace(const HalfSpacePoint& p);
/// Throws ErrorCode::point_at_infinity for the line of the point at infinity.
HalfSpacePoint halfspace_from_ball(const ProjectivePoint& z);
/// Non-homogeneous ball coordinates y_{n+1}^{-1} (y_1, ..., y_n).
FVector ball_coords(const ProjectivePoint& z);

/// Boundary inversion I(xi, v) = ((|xi|^2 - v)^{-1} xi, -v / (|v|^2 + |xi|^4)).
/// The quotient is a left multiplication, matching the left-module
/// convention. Throws ErrorCode::point_at_infinity at the origin.
CarnotPoint invert_unit(const CarnotPoint& p);

/// Inversion on the half-space: with A = |xi|^2 + u - v,
/// (xi, v, u) -> (A^{-1} xi, -v/|A|^2, u/|A|^2). Coincides with the boundary
/// formula at u = 0.
HalfSpacePoint invert_unit(const HalfSpacePoint& p);

/// The same inversion computed by transport: lift to the projective model,
/// flip y_n, and come back. Loses relative precision in u near the boundary;
/// kept as an independent route for cross-checks.
HalfSpacePoint invert_unit_transport(const HalfSpacePoint& p);

struct Ball {
  CarnotPoint center;
  double radius = 1.0;
};

/// h_B = D_{1/r} o T_{c^{-1}}, mapping B onto the unit ball at the origin.
HalfSpacePoint normalize_to_unit(const Ball& b, const HalfSpacePoint& p);
HalfSpacePoint denormalize_from_unit(const Ball& b, const HalfSpacePoint& p);

/// I_B = h_B^{-1} o I o h_B.
HalfSpacePoint invert_in_ball(const Ball& b, const HalfSpacePoint& p);

enum class Side { inside, on, outside };
const char* to_string(Side s) noexcept;

/// Classifies p by the gauge of h_B(p) against 1. "inside" is the half-space
/// component B^+ that has B at infinity.
Side bisector_side(const Ball& b, const HalfSpacePoint& p, double tol = 1e-12);

// ----------------------------------------------------------- isometries

struct Translate {
  CarnotPoint by;
};
struct Dilate {
  Scalar lambda;
};
struct InvertUnit {};
struct InvertInBall {
  Ball ball;
};

using Primitive = std::variant<Translate, Dilate, InvertUnit, InvertInBall>;

HalfSpacePoint apply(const Primitive& g, const HalfSpacePoint& p);
Primitive inverse(const Primitive& g);

/// Action of a primitive on projective coordinates through its matrix in
/// the isometry group of the form.
ProjectivePoint act_linear(const Primitive& g, const ProjectivePoint& z);

/// Word of primitives, evaluated left to right: the first primitive is
/// applied first.
class Isometry {
 public:
  Isometry() = default;
  explicit Isometry(std::vector<Primitive> word) : word_(std::move(word)) {}

  static Isometry identity() { return {}; }

  const std::vector<Primitive>& word() const noexcept { return word_; }
  bool empty() const noexcept { return word_.empty(); }

  HalfSpacePoint operator()(const HalfSpacePoint& p) const;
  ProjectivePoint act_linear(const ProjectivePoint& z) const;

  Isometry inverse() const;
  /// Apply *this first, then `next`.
  Isometry then(const Isometry& next) const;
  /// g^k with k >= 0.
  Isometry power(int k) const;

 private:
  std::vector<Primitive> word_;
};

struct TranslationLength {
  int iterations = 0;     // N
  double coarse = 0.0;    // d(x0, g^N x0) / N
  double refined = 0.0;   // d(x0, g^{2N} x0) / (2N)
  double error = 0.0;     // |coarse - refined| plus a rounding floor

  double estimate() const noexcept { return refined; }
};

/// Orbit estimate of the translation length. Throws ErrorCode::degenerate
/// when the orbit leaves double range; retry with a smaller N.
TranslationLength translation_length(const Isometry& g, const HalfSpacePoint& x0, int n_iter);
TranslationLength translation_length(const Isometry& g, const ProjectivePoint& x0, int n_iter);

/// A point on the invariant geodesic of a loxodromic g, located from the
/// boundary limits of forward and backward orbits of `seed`. Empty when the
/// orbit does not approach the boundary within `max_iter` steps.
std::optional<HalfSpacePoint> axis_point(const Isometry& g, const HalfSpacePoint& seed,
                                         int max_iter = 200);

}  // namespace nilcarpet
