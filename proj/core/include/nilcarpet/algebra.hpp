#pragma once

// Arithmetic over the associative real division algebras R, C and H.
//
// Every value carries its algebra tag at run time; mixing tags is an error.
// Quaternion components are ordered (1, i, j, k). Vectors over H are left
// modules: scalars multiply from the left and the Hermitian product is
// <z, w> = sum z_i * conj(w_i), products taken left to right.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nilcarpet {

enum class Algebra : std::uint8_t { Real, Complex, Quaternion };

/// Real dimension of the algebra: 1, 2 or 4.
constexpr int real_dim(Algebra a) noexcept {
  switch (a) {
    case Algebra::Real: return 1;
    case Algebra::Complex: return 2;
    case Algebra::Quaternion: return 4;
  }
  return 1;
}

/// Real dimension of the imaginary part: 0, 1 or 3.
constexpr int imag_dim(Algebra a) noexcept { return real_dim(a) - 1; }

const char* to_string(Algebra a) noexcept;
Algebra algebra_from_string(const std::string& s);

class ImScalar;

class Scalar {
 public:
  Scalar() = default;
  Scalar(Algebra a, std::array<double, 4> coords);

  static Scalar real(Algebra a, double x) { return Scalar(a, {x, 0, 0, 0}); }
  static Scalar zero(Algebra a) { return real(a, 0.0); }
  /// Basis element 1, i, j or k (axis 0..real_dim-1).
  static Scalar basis(Algebra a, int axis);

  Algebra algebra() const noexcept { return alg_; }
  double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  const std::array<double, 4>& coords() const noexcept { return c_; }
  double re() const noexcept { return c_[0]; }

  Scalar conj() const noexcept;
  ImScalar im() const noexcept;
  double norm2() const noexcept;
  double norm() const noexcept;
  /// conj(x) / |x|^2; throws on zero.
  Scalar inverse() const;
  bool is_zero() const noexcept;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(double s) noexcept;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator-(Scalar a) noexcept { return a *= -1.0; }
  friend Scalar operator*(Scalar a, double s) noexcept { return a *= s; }
  friend Scalar operator*(double s, Scalar a) noexcept { return a *= s; }
  /// Algebra product (non-commutative for H).
  friend Scalar operator*(const Scalar& a, const Scalar& b);

  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  Algebra alg_ = Algebra::Real;
  std::array<double, 4> c_{};
};

/// Pure-imaginary element; coordinates ordered (i, j, k).
class ImScalar {
 public:
  ImScalar() = default;
  ImScalar(Algebra a, std::array<double, 3> coords);
  static ImScalar zero(Algebra a) { return ImScalar(a, {0, 0, 0}); }

  Algebra algebra() const noexcept { return alg_; }
  double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  const std::array<double, 3>& coords() const noexcept { return c_; }

  Scalar as_scalar() const noexcept;
  ImScalar conj() const noexcept { return -*this; }
  double norm2() const noexcept;
  double norm() const noexcept;

  ImScalar& operator+=(const ImScalar& o);
  ImScalar& operator-=(const ImScalar& o);
  ImScalar& operator*=(double s) noexcept;

  friend ImScalar operator+(ImScalar a, const ImScalar& b) { return a += b; }
  friend ImScalar operator-(ImScalar a, const ImScalar& b) { return a -= b; }
  friend ImScalar operator-(ImScalar a) noexcept { return a *= -1.0; }
  friend ImScalar operator*(ImScalar a, double s) noexcept { return a *= s; }
  friend ImScalar operator*(double s, ImScalar a) noexcept { return a *= s; }

  friend bool operator==(const ImScalar&, const ImScalar&) = default;

 private:
  Algebra alg_ = Algebra::Real;
  std::array<double, 3> c_{};
};

/// Returns (conj(a), Im(a)) with Im(a) = (a - conj(a)) / 2.
std::pair<Scalar, ImScalar> conj_im(const Scalar& a) noexcept;

/// Vector in the left module F^m.
class FVector {
 public:
  FVector() = default;
  FVector(Algebra a, std::size_t size);
  FVector(Algebra a, std::vector<Scalar> entries);

  Algebra algebra() const noexcept { return alg_; }
  std::size_t size() const noexcept { return e_.size(); }
  const Scalar& operator[](std::size_t i) const { return e_[i]; }
  Scalar& operator[](std::size_t i) { return e_[i]; }
  std::span<const Scalar> entries() const noexcept { return e_; }

  double norm2() const noexcept;

  /// Flattened real coordinates, entry by entry.
  std::vector<double> real_coords() const;
  static FVector from_real_coords(Algebra a, std::span<const double> coords);

  FVector& operator+=(const FVector& o);
  FVector& operator-=(const FVector& o);

  friend FVector operator+(FVector a, const FVector& b) { return a += b; }
  friend FVector operator-(FVector a, const FVector& b) { return a -= b; }
  friend FVector operator-(FVector a);
  /// Left scalar multiplication.
  friend FVector operator*(const Scalar& s, const FVector& v);
  friend FVector operator*(double s, FVector v);

  friend bool operator==(const FVector&, const FVector&) = default;

 private:
  Algebra alg_ = Algebra::Real;
  std::vector<Scalar> e_;
};

/// <z, w> = sum z_i * conj(w_i).
Scalar hermitian(const FVector& z, const FVector& w);

std::ostream& operator<<(std::ostream& os, const Scalar& s);
std::ostream& operator<<(std::ostream& os, const ImScalar& s);

}  // namespace nilcarpet
