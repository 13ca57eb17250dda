#include "nilcarpet/hyperbolic.hpp"

#include <cmath>
#include <limits>

#include "nilcarpet/error.hpp"

namespace nilcarpet {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865476;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Diagonal-form coordinates -> Siegel coordinates (z_0, zeta, z_n). Real change of
// basis, so it commutes with the left scalar action.
std::vector<Scalar> to_siegel(const ProjectivePoint& y) {
  const std::size_t m = y.size();
  const Scalar& yn = y.homog[m - 2];
  const Scalar& yn1 = y.homog[m - 1];
  std::vector<Scalar> out;
  out.reserve(m);
  out.push_back((yn - yn1) * kInvSqrt2);
  for (std::size_t i = 0; i + 2 < m; ++i) out.push_back(y.homog[i]);
  out.push_back((yn + yn1) * kInvSqrt2);
  return out;
}

ProjectivePoint from_siegel(Algebra a, const std::vector<Scalar>& z) {
  const std::size_t m = z.size();
  ProjectivePoint y{a, {}};
  y.homog.reserve(m);
  for (std::size_t i = 1; i + 1 < m; ++i) y.homog.push_back(z[i]);
  y.homog.push_back((z[0] + z[m - 1]) * kInvSqrt2);
  y.homog.push_back((z[m - 1] - z[0]) * kInvSqrt2);
  return y;
}

void require_same_shape(const ProjectivePoint& z, const ProjectivePoint& w) {
  if (z.algebra != w.algebra || z.size() != w.size()) {
    fail(ErrorCode::dimension_mismatch, "projective points of different shape");
  }
  if (z.size() < 3) fail(ErrorCode::dimension_mismatch, "projective point needs n >= 2");
}

}  // namespace

Scalar hform(const ProjectivePoint& z, const ProjectivePoint& w) {
  require_same_shape(z, w);
  Scalar acc = Scalar::zero(z.algebra);
  const std::size_t last = z.size() - 1;
  for (std::size_t i = 0; i < last; ++i) acc += z.homog[i] * w.homog[i].conj();
  acc -= z.homog[last] * w.homog[last].conj();
  return acc;
}

double dist(const ProjectivePoint& z, const ProjectivePoint& w) {
  const double zz = hform(z, z).re();
  const double ww = hform(w, w).re();
  if (!(zz < 0.0) || !(ww < 0.0)) {
    fail(ErrorCode::invalid_argument, "dist: both points must be interior (negative lines)");
  }
  const double zw2 = hform(z, w).norm2();
  const double c2 = std::max(1.0, zw2 / (zz * ww));
  return 2.0 * std::acosh(std::sqrt(c2));
}

double dist(const HalfSpacePoint& p, const HalfSpacePoint& q) {
  if (!(p.u > 0.0) || !(q.u > 0.0)) {
    fail(ErrorCode::invalid_argument, "dist: both points must be interior (u > 0)");
  }
  const double re = (p.xi - q.xi).norm2() + p.u + q.u;
  const ImScalar im = p.v - q.v + 2.0 * hermitian(p.xi, q.xi).im();
  const double modulus = std::sqrt(re * re + im.norm2());
  const double c = std::max(1.0, modulus / (2.0 * std::sqrt(p.u) * std::sqrt(q.u)));
  return 2.0 * std::acosh(c);
}

ProjectivePoint ball_from_halfspace(const HalfSpacePoint& p) {
  const Algebra alg = p.xi.algebra();
  const Scalar a = Scalar::real(alg, -p.xi.norm2() - p.u) + p.v.as_scalar();
  const Scalar one = Scalar::real(alg, 1.0);
  ProjectivePoint y{alg, {}};
  y.homog.reserve(p.xi.size() + 2);
  for (const auto& x : p.xi.entries()) y.homog.push_back(x * kSqrt2);
  y.homog.push_back((a + one) * kInvSqrt2);
  y.homog.push_back((one - a) * kInvSqrt2);
  return y;
}

HalfSpacePoint halfspace_from_ball(const ProjectivePoint& y) {
  if (y.size() < 3) fail(ErrorCode::dimension_mismatch, "projective point needs n >= 2");
  const auto z = to_siegel(y);
  const Scalar& zn = z.back();
  double scale = 0.0;
  for (const auto& s : z) scale = std::max(scale, s.norm());
  if (scale == 0.0) fail(ErrorCode::invalid_argument, "zero vector is not a projective point");
  if (zn.norm() <= 1e-14 * scale) {
    fail(ErrorCode::point_at_infinity, "line of the point at infinity has no half-space chart");
  }
  const Scalar inv = zn.inverse();
  const Scalar a = inv * z.front();
  std::vector<Scalar> xi;
  xi.reserve(z.size() - 2);
  for (std::size_t i = 1; i + 1 < z.size(); ++i) xi.push_back((inv * z[i]) * kInvSqrt2);
  FVector xv(y.algebra, std::move(xi));
  double u = -a.re() - xv.norm2();
  if (u < 0.0) {
    if (u < -1e-12 * (1.0 + a.norm())) {
      fail(ErrorCode::invalid_argument, "positive line lies outside the closed ball");
    }
    u = 0.0;
  }
  return {std::move(xv), a.im(), u};
}

FVector ball_coords(const ProjectivePoint& z) {
  const Scalar& last = z.homog.back();
  if (last.norm() == 0.0) fail(ErrorCode::point_at_infinity, "ball chart undefined");
  const Scalar inv = last.inverse();
  std::vector<Scalar> out;
  out.reserve(z.size() - 1);
  for (std::size_t i = 0; i + 1 < z.size(); ++i) out.push_back(inv * z.homog[i]);
  return FVector(z.algebra, std::move(out));
}

CarnotPoint invert_unit(const CarnotPoint& p) {
  const Scalar b = Scalar::real(p.xi.algebra(), p.xi.norm2()) - p.v.as_scalar();
  const double b2 = b.norm2();
  if (b2 == 0.0) fail(ErrorCode::point_at_infinity, "inversion maps the origin to infinity");
  return {b.inverse() * p.xi, p.v * (-1.0 / b2)};
}

HalfSpacePoint invert_unit(const HalfSpacePoint& p) {
  if (p.u == 0.0) return HalfSpacePoint::at(invert_unit(p.base()));
  const Scalar a = Scalar::real(p.xi.algebra(), p.xi.norm2() + p.u) - p.v.as_scalar();
  const double a2 = a.norm2();
  if (a2 == 0.0) fail(ErrorCode::point_at_infinity, "inversion maps the origin to infinity");
  return {a.inverse() * p.xi, p.v * (-1.0 / a2), p.u / a2};
}

HalfSpacePoint invert_unit_transport(const HalfSpacePoint& p) {
  ProjectivePoint y = ball_from_halfspace(p);
  auto& yn = y.homog[y.size() - 2];
  yn = -yn;
  return halfspace_from_ball(y);
}

HalfSpacePoint normalize_to_unit(const Ball& b, const HalfSpacePoint& p) {
  return dilate(1.0 / b.radius, translate(group_inv(b.center), p));
}

HalfSpacePoint denormalize_from_unit(const Ball& b, const HalfSpacePoint& p) {
  return translate(b.center, dilate(b.radius, p));
}

HalfSpacePoint invert_in_ball(const Ball& b, const HalfSpacePoint& p) {
  if (!(b.radius > 0.0)) fail(ErrorCode::invalid_argument, "ball radius must be positive");
  return denormalize_from_unit(b, invert_unit(normalize_to_unit(b, p)));
}

const char* to_string(Side s) noexcept {
  switch (s) {
    case Side::inside: return "inside";
    case Side::on: return "on";
    case Side::outside: return "outside";
  }
  return "?";
}

Side bisector_side(const Ball& b, const HalfSpacePoint& p, double tol) {
  const double g = kc_norm(normalize_to_unit(b, p));
  if (g < 1.0 - tol) return Side::inside;
  if (g <= 1.0 + tol) return Side::on;
  return Side::outside;
}

// ----------------------------------------------------------- isometries

HalfSpacePoint apply(const Primitive& g, const HalfSpacePoint& p) {
  return std::visit(overloaded{
                        [&](const Translate& t) { return translate(t.by, p); },
                        [&](const Dilate& d) { return dilate(d.lambda, p); },
                        [&](const InvertUnit&) { return invert_unit(p); },
                        [&](const InvertInBall& b) { return invert_in_ball(b.ball, p); },
                    },
                    g);
}

Primitive inverse(const Primitive& g) {
  return std::visit(overloaded{
                        [](const Translate& t) -> Primitive { return Translate{group_inv(t.by)}; },
                        [](const Dilate& d) -> Primitive { return Dilate{d.lambda.inverse()}; },
                        [](const InvertUnit& i) -> Primitive { return i; },
                        [](const InvertInBall& b) -> Primitive { return b; },
                    },
                    g);
}

namespace {

// Row-vector actions z -> z M in Siegel coordinates.
std::vector<Scalar> siegel_translate(const CarnotPoint& g, std::vector<Scalar> z) {
  const std::size_t m = z.size();
  const Algebra alg = g.xi.algebra();
  if (g.xi.size() + 2 != m) fail(ErrorCode::dimension_mismatch, "translation shape mismatch");
  const Scalar zn = z[m - 1];
  Scalar z0 = z[0] + zn * (Scalar::real(alg, -g.xi.norm2()) + g.v.as_scalar());
  for (std::size_t i = 1; i + 1 < m; ++i) {
    z0 += z[i] * (g.xi[i - 1].conj() * -kSqrt2);
    z[i] += zn * (g.xi[i - 1] * kSqrt2);
  }
  z[0] = z0;
  return z;
}

std::vector<Scalar> siegel_dilate(const Scalar& lambda, std::vector<Scalar> z) {
  z.front() = z.front() * lambda.conj();
  z.back() = z.back() * lambda.inverse();
  return z;
}

std::vector<Scalar> siegel_invert(std::vector<Scalar> z) {
  const Scalar z0 = z.front();
  z.front() = -z.back();
  z.back() = -z0;
  return z;
}

std::vector<Scalar> siegel_act(const Primitive& g, std::vector<Scalar> z) {
  return std::visit(
      overloaded{
          [&](const Translate& t) { return siegel_translate(t.by, std::move(z)); },
          [&](const Dilate& d) { return siegel_dilate(d.lambda, std::move(z)); },
          [&](const InvertUnit&) { return siegel_invert(std::move(z)); },
          [&](const InvertInBall& b) {
            const Algebra alg = b.ball.center.xi.algebra();
            auto w = siegel_translate(group_inv(b.ball.center), std::move(z));
            w = siegel_dilate(Scalar::real(alg, 1.0 / b.ball.radius), std::move(w));
            w = siegel_invert(std::move(w));
            w = siegel_dilate(Scalar::real(alg, b.ball.radius), std::move(w));
            return siegel_translate(b.ball.center, std::move(w));
          },
      },
      g);
}

}  // namespace

ProjectivePoint act_linear(const Primitive& g, const ProjectivePoint& z) {
  return from_siegel(z.algebra, siegel_act(g, to_siegel(z)));
}

HalfSpacePoint Isometry::operator()(const HalfSpacePoint& p) const {
  HalfSpacePoint q = p;
  for (const auto& g : word_) q = apply(g, q);
  return q;
}

ProjectivePoint Isometry::act_linear(const ProjectivePoint& z) const {
  auto w = to_siegel(z);
  for (const auto& g : word_) w = siegel_act(g, std::move(w));
  return from_siegel(z.algebra, w);
}

Isometry Isometry::inverse() const {
  std::vector<Primitive> w;
  w.reserve(word_.size());
  for (auto it = word_.rbegin(); it != word_.rend(); ++it) w.push_back(nilcarpet::inverse(*it));
  return Isometry(std::move(w));
}

Isometry Isometry::then(const Isometry& next) const {
  std::vector<Primitive> w = word_;
  w.insert(w.end(), next.word_.begin(), next.word_.end());
  return Isometry(std::move(w));
}

Isometry Isometry::power(int k) const {
  if (k < 0) fail(ErrorCode::invalid_argument, "negative power; invert first");
  std::vector<Primitive> w;
  w.reserve(word_.size() * static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) w.insert(w.end(), word_.begin(), word_.end());
  return Isometry(std::move(w));
}

TranslationLength translation_length(const Isometry& g, const HalfSpacePoint& x0, int n_iter) {
  if (n_iter < 1) fail(ErrorCode::invalid_argument, "translation_length: N must be >= 1");
  if (!(x0.u > 0.0)) fail(ErrorCode::invalid_argument, "translation_length: x0 must be interior");
  HalfSpacePoint x = x0;
  double d_n = 0.0;
  for (int k = 1; k <= 2 * n_iter; ++k) {
    x = g(x);
    if (!(x.u > std::numeric_limits<double>::min()) || !std::isfinite(x.u) ||
        !std::isfinite(x.xi.norm2()) || !std::isfinite(x.v.norm2())) {
      fail(ErrorCode::degenerate,
           "orbit left numerical range at step " + std::to_string(k) + "; reduce N");
    }
    if (k == n_iter) d_n = dist(x0, x);
  }
  const double d_2n = dist(x0, x);
  TranslationLength out;
  out.iterations = n_iter;
  out.coarse = d_n / n_iter;
  out.refined = d_2n / (2.0 * n_iter);
  out.error = std::abs(out.coarse - out.refined) + 1e-12 * (1.0 + out.refined);
  return out;
}

TranslationLength translation_length(const Isometry& g, const ProjectivePoint& x0, int n_iter) {
  return translation_length(g, halfspace_from_ball(x0), n_iter);
}

namespace {

std::optional<CarnotPoint> boundary_limit(const Isometry& g, HalfSpacePoint x, int max_iter) {
  for (int k = 0; k < max_iter; ++k) {
    x = g(x);
    if (!std::isfinite(x.u) || !std::isfinite(x.xi.norm2())) return std::nullopt;
    const double scale = std::max(1.0, kc_norm(x.base()));
    if (x.u <= 1e-26 * scale * scale) return x.base();
  }
  return std::nullopt;
}

}  // namespace

std::optional<HalfSpacePoint> axis_point(const Isometry& g, const HalfSpacePoint& seed,
                                         int max_iter) {
  const auto plus = boundary_limit(g, seed, max_iter);
  const auto minus = boundary_limit(g.inverse(), seed, max_iter);
  if (!plus || !minus) return std::nullopt;
  const CarnotPoint q = group_mul(group_inv(*minus), *plus);
  if (kc_norm(q) < 1e-9) return std::nullopt;
  const CarnotPoint w = invert_unit(q);
  const double s = kc_norm(w);
  const HalfSpacePoint on_axis = HalfSpacePoint::at(w, s * s);
  return translate(*minus, invert_unit(on_axis));
}

}  // namespace nilcarpet
