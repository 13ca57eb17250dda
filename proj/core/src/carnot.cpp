#include "nilcarpet/carnot.hpp"

#include <cmath>

#include "nilcarpet/error.hpp"

namespace nilcarpet {

namespace {

void require_compatible(const FVector& a, const FVector& b) {
  if (a.algebra() != b.algebra() || a.size() != b.size()) {
    fail(ErrorCode::dimension_mismatch, "Carnot points of different shape");
  }
}

// |re - v|_F for a real part and an imaginary part, as a Euclidean norm.
double mixed_modulus(double re, const ImScalar& v) {
  return std::sqrt(re * re + v.norm2());
}

}  // namespace

CarnotPoint CarnotPoint::identity(const CarnotShape& shape) {
  return {FVector(shape.algebra, shape.xi_size()), ImScalar::zero(shape.algebra)};
}

CarnotShape CarnotPoint::shape() const noexcept {
  return {xi.algebra(), static_cast<int>(xi.size()) + 1};
}

HalfSpacePoint HalfSpacePoint::origin(const CarnotShape& shape) {
  return {FVector(shape.algebra, shape.xi_size()), ImScalar::zero(shape.algebra), 0.0};
}

HalfSpacePoint HalfSpacePoint::at(const CarnotPoint& base, double u) {
  if (!(u >= 0.0)) fail(ErrorCode::invalid_argument, "negative horospherical height");
  return {base.xi, base.v, u};
}

CarnotShape HalfSpacePoint::shape() const noexcept {
  return {xi.algebra(), static_cast<int>(xi.size()) + 1};
}

CarnotPoint group_mul(const CarnotPoint& a, const CarnotPoint& b) {
  require_compatible(a.xi, b.xi);
  return {a.xi + b.xi, a.v + b.v + 2.0 * hermitian(a.xi, b.xi).im()};
}

CarnotPoint group_inv(const CarnotPoint& a) { return {-a.xi, -a.v}; }

HalfSpacePoint translate(const CarnotPoint& g, const HalfSpacePoint& p) {
  require_compatible(g.xi, p.xi);
  return {g.xi + p.xi, g.v + p.v + 2.0 * hermitian(g.xi, p.xi).im(), p.u};
}

HalfSpacePoint dilate(const Scalar& lambda, const HalfSpacePoint& p) {
  if (lambda.is_zero()) fail(ErrorCode::invalid_argument, "dilation by zero");
  const double n2 = lambda.norm2();
  const ImScalar v = (lambda * p.v.as_scalar() * lambda.conj()).im();
  return {lambda * p.xi, v, n2 * p.u};
}

HalfSpacePoint dilate(double lambda, const HalfSpacePoint& p) {
  if (lambda == 0.0) fail(ErrorCode::invalid_argument, "dilation by zero");
  const double n2 = lambda * lambda;
  return {lambda * p.xi, p.v * n2, n2 * p.u};
}

double kc_norm(const HalfSpacePoint& p) {
  return std::sqrt(mixed_modulus(p.xi.norm2() + p.u, p.v));
}

double kc_norm(const CarnotPoint& p) { return std::sqrt(mixed_modulus(p.xi.norm2(), p.v)); }

double kc_dist(const HalfSpacePoint& p, const HalfSpacePoint& q) {
  require_compatible(p.xi, q.xi);
  const double re = (p.xi - q.xi).norm2() + std::abs(p.u - q.u);
  const ImScalar im = p.v - q.v + 2.0 * hermitian(p.xi, q.xi).im();
  return std::sqrt(mixed_modulus(re, im));
}

double kc_dist(const CarnotPoint& p, const CarnotPoint& q) {
  return kc_dist(HalfSpacePoint::at(p), HalfSpacePoint::at(q));
}

std::vector<double> to_chart(const HalfSpacePoint& p) {
  std::vector<double> out = p.xi.real_coords();
  for (int i = 0; i < imag_dim(p.v.algebra()); ++i) out.push_back(p.v[i]);
  out.push_back(p.u);
  return out;
}

HalfSpacePoint from_chart(const CarnotShape& shape, std::span<const double> chart) {
  const auto h = static_cast<std::size_t>(shape.horizontal_dim());
  const auto vd = static_cast<std::size_t>(shape.vertical_dim());
  if (chart.size() != h + vd + 1) {
    fail(ErrorCode::dimension_mismatch, "chart coordinate count does not match shape");
  }
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < vd; ++i) v[i] = chart[h + i];
  const double u = chart[h + vd];
  if (!(u >= 0.0)) fail(ErrorCode::invalid_argument, "negative horospherical height");
  return {FVector::from_real_coords(shape.algebra, chart.first(h)), ImScalar(shape.algebra, v), u};
}

double chart_distance(const HalfSpacePoint& p, const HalfSpacePoint& q) {
  const auto a = to_chart(p);
  const auto b = to_chart(q);
  if (a.size() != b.size()) fail(ErrorCode::dimension_mismatch, "chart size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace nilcarpet
