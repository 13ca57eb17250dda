#pragma once

// Reference implementations written independently of the library: plain
// std::complex Heisenberg arithmetic, a Hamilton product from the
// multiplication table, brute-force carpet membership and a quadrature of
// the stretch density. Tests compare library results against these.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Hamilton product on (1, i, j, k) coordinates.
inline std::array<double, 4> hamilton(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

/// Heisenberg group C x Im C with (z, s)(w, t) = (z + w, s + t + 2 Im(z conj w)),
/// the vertical part stored as its real coefficient of i.
struct Heis {
  cplx z;
  double s = 0.0;
};

inline Heis heis_mul(const Heis& a, const Heis& b) { return {a.z + b.z, a.s + b.s + 2.0 * std::imag(a.z * std::conj(b.z))}; }
inline Heis heis_inv(const Heis& a) { return {-a.z, -a.s}; }
inline double heis_gauge(const Heis& a) {
  const double n2 = std::norm(a.z);
  return std::pow(n2 * n2 + a.s * a.s, 0.25);
}
inline double heis_dist(const Heis& a, const Heis& b) { return heis_gauge(heis_mul(heis_inv(a), b)); }

/// Carpet membership by explicit recursion over nested cells, with exact
/// integer indices at each level.
inline bool in_carpet(const std::vector<double>& x, const std::vector<int>& k, int depth) {
  std::vector<double> lo(x.size(), -0.5);
  double width = 1.0;
  for (int level = 0; level < depth; ++level) {
    const int kk = k[static_cast<std::size_t>(level)];
    const double w = width / kk;
    bool all_central = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double rel = (x[i] - lo[i]) / w;
      const int idx = std::clamp(static_cast<int>(std::floor(rel)), 0, kk - 1);
      const bool interior = rel > kk / 2 && rel < kk / 2 + 1;
      if (!interior) all_central = false;
      lo[i] += idx * w;
    }
    if (all_central) return false;
    width = w;
  }
  return true;
}

inline double carpet_measure(const std::vector<int>& k, int dim) {
  double m = 1.0;
  for (int kk : k) m *= 1.0 - std::pow(static_cast<double>(kk), -dim);
  return m;
}

/// Midpoint rule for int_{-1/2}^{x} density, with `density` piecewise
/// constant; m subintervals.
template <class F>
double integrate(F density, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += density(a + (i + 0.5) * h);
  return s * h;
}

}  // namespace oracle
