#include "nilcarpet/algebra.hpp"

#include <cmath>
#include <ostream>

#include "nilcarpet/error.hpp"

namespace nilcarpet {

namespace {

void require_same(Algebra a, Algebra b) {
  if (a != b) {
    fail(ErrorCode::algebra_mismatch,
         std::string("algebra mismatch: ") + to_string(a) + " vs " + to_string(b));
  }
}

}  // namespace

const char* to_string(Algebra a) noexcept {
  switch (a) {
    case Algebra::Real: return "R";
    case Algebra::Complex: return "C";
    case Algebra::Quaternion: return "H";
  }
  return "?";
}

Algebra algebra_from_string(const std::string& s) {
  if (s == "R") return Algebra::Real;
  if (s == "C") return Algebra::Complex;
  if (s == "H") return Algebra::Quaternion;
  fail(ErrorCode::invalid_argument, "unknown algebra '" + s + "' (expected R, C or H)");
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(Algebra a, std::array<double, 4> coords) : alg_(a), c_(coords) {
  for (int i = real_dim(a); i < 4; ++i) c_[static_cast<std::size_t>(i)] = 0.0;
}

Scalar Scalar::basis(Algebra a, int axis) {
  if (axis < 0 || axis >= real_dim(a)) {
    fail(ErrorCode::out_of_range, "basis axis out of range for algebra");
  }
  std::array<double, 4> c{};
  c[static_cast<std::size_t>(axis)] = 1.0;
  return Scalar(a, c);
}

Scalar Scalar::conj() const noexcept {
  Scalar r = *this;
  r.c_[1] = -r.c_[1];
  r.c_[2] = -r.c_[2];
  r.c_[3] = -r.c_[3];
  return r;
}

ImScalar Scalar::im() const noexcept { return ImScalar(alg_, {c_[1], c_[2], c_[3]}); }

double Scalar::norm2() const noexcept {
  return c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2] + c_[3] * c_[3];
}

double Scalar::norm() const noexcept {
  switch (alg_) {
    case Algebra::Real: return std::abs(c_[0]);
    case Algebra::Complex: return std::hypot(c_[0], c_[1]);
    case Algebra::Quaternion: return std::sqrt(norm2());
  }
  return std::sqrt(norm2());
}

Scalar Scalar::inverse() const {
  const double n2 = norm2();
  if (n2 == 0.0) fail(ErrorCode::degenerate, "inverse of zero scalar");
  Scalar r = conj();
  r *= 1.0 / n2;
  return r;
}

bool Scalar::is_zero() const noexcept {
  return c_[0] == 0.0 && c_[1] == 0.0 && c_[2] == 0.0 && c_[3] == 0.0;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same(alg_, o.alg_);
  for (std::size_t i = 0; i < 4; ++i) c_[i] += o.c_[i];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same(alg_, o.alg_);
  for (std::size_t i = 0; i < 4; ++i) c_[i] -= o.c_[i];
  return *this;
}

Scalar& Scalar::operator*=(double s) noexcept {
  for (auto& x : c_) x *= s;
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same(a.alg_, b.alg_);
  const auto& x = a.c_;
  const auto& y = b.c_;
  switch (a.alg_) {
    case Algebra::Real:
      return Scalar(Algebra::Real, {x[0] * y[0], 0, 0, 0});
    case Algebra::Complex:
      return Scalar(Algebra::Complex,
                    {x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0], 0, 0});
    case Algebra::Quaternion:
      return Scalar(Algebra::Quaternion,
                    {x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
                     x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
                     x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
                     x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0]});
  }
  return Scalar();
}

// -------------------------------------------------------------- ImScalar

ImScalar::ImScalar(Algebra a, std::array<double, 3> coords) : alg_(a), c_(coords) {
  for (int i = imag_dim(a); i < 3; ++i) c_[static_cast<std::size_t>(i)] = 0.0;
}

Scalar ImScalar::as_scalar() const noexcept { return Scalar(alg_, {0.0, c_[0], c_[1], c_[2]}); }

double ImScalar::norm2() const noexcept { return c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2]; }

double ImScalar::norm() const noexcept { return std::sqrt(norm2()); }

ImScalar& ImScalar::operator+=(const ImScalar& o) {
  require_same(alg_, o.alg_);
  for (std::size_t i = 0; i < 3; ++i) c_[i] += o.c_[i];
  return *this;
}

ImScalar& ImScalar::operator-=(const ImScalar& o) {
  require_same(alg_, o.alg_);
  for (std::size_t i = 0; i < 3; ++i) c_[i] -= o.c_[i];
  return *this;
}

ImScalar& ImScalar::operator*=(double s) noexcept {
  for (auto& x : c_) x *= s;
  return *this;
}

std::pair<Scalar, ImScalar> conj_im(const Scalar& a) noexcept { return {a.conj(), a.im()}; }

// --------------------------------------------------------------- FVector

FVector::FVector(Algebra a, std::size_t size) : alg_(a), e_(size, Scalar::zero(a)) {}

FVector::FVector(Algebra a, std::vector<Scalar> entries) : alg_(a), e_(std::move(entries)) {
  for (const auto& s : e_) require_same(a, s.algebra());
}

double FVector::norm2() const noexcept {
  double s = 0.0;
  for (const auto& x : e_) s += x.norm2();
  return s;
}

std::vector<double> FVector::real_coords() const {
  const int k = real_dim(alg_);
  std::vector<double> out;
  out.reserve(e_.size() * static_cast<std::size_t>(k));
  for (const auto& x : e_) {
    for (int i = 0; i < k; ++i) out.push_back(x[i]);
  }
  return out;
}

FVector FVector::from_real_coords(Algebra a, std::span<const double> coords) {
  const auto k = static_cast<std::size_t>(real_dim(a));
  if (coords.size() % k != 0) {
    fail(ErrorCode::dimension_mismatch, "real coordinate count not a multiple of algebra dimension");
  }
  std::vector<Scalar> e;
  e.reserve(coords.size() / k);
  for (std::size_t i = 0; i < coords.size(); i += k) {
    std::array<double, 4> c{};
    for (std::size_t j = 0; j < k; ++j) c[j] = coords[i + j];
    e.emplace_back(a, c);
  }
  return FVector(a, std::move(e));
}

FVector& FVector::operator+=(const FVector& o) {
  require_same(alg_, o.alg_);
  if (o.size() != size()) fail(ErrorCode::dimension_mismatch, "vector length mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

FVector& FVector::operator-=(const FVector& o) {
  require_same(alg_, o.alg_);
  if (o.size() != size()) fail(ErrorCode::dimension_mismatch, "vector length mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

FVector operator-(FVector a) {
  for (auto& x : a.e_) x = -x;
  return a;
}

FVector operator*(const Scalar& s, const FVector& v) {
  FVector r = v;
  for (auto& x : r.e_) x = s * x;
  return r;
}

FVector operator*(double s, FVector v) {
  for (auto& x : v.e_) x *= s;
  return v;
}

Scalar hermitian(const FVector& z, const FVector& w) {
  require_same(z.algebra(), w.algebra());
  if (z.size() != w.size()) fail(ErrorCode::dimension_mismatch, "hermitian: length mismatch");
  Scalar acc = Scalar::zero(z.algebra());
  for (std::size_t i = 0; i < z.size(); ++i) acc += z[i] * w[i].conj();
  return acc;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
  static constexpr const char* units[4] = {"", "i", "j", "k"};
  os << '(';
  for (int i = 0; i < real_dim(s.algebra()); ++i) {
    if (i) os << ' ';
    os << s[i] << units[i];
  }
  return os << ')';
}

std::ostream& operator<<(std::ostream& os, const ImScalar& s) { return os << s.as_scalar(); }

}  // namespace nilcarpet
