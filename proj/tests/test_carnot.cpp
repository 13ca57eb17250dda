#include <gtest/gtest.h>

#include <cmath>

#include "nilcarpet/carnot.hpp"
#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"
#include "oracle.hpp"

using namespace nilcarpet;

namespace {

const CarnotShape kHeis{Algebra::Complex, 2};

Scalar c(double a, double b) { return Scalar(Algebra::Complex, {a, b, 0, 0}); }
ImScalar ci(double b) { return ImScalar(Algebra::Complex, {b, 0, 0}); }
CarnotPoint heis(double x, double y, double s) { return {FVector(Algebra::Complex, {c(x, y)}), ci(s)}; }

HalfSpacePoint random_point(const CarnotShape& shape, Rng& rng, double u_max) {
  std::vector<double> x(static_cast<std::size_t>(shape.dim()) + 1);
  for (auto& xi : x) xi = rng.uniform(-1, 1);
  x.back() = u_max > 0 ? rng.uniform(0, u_max) : 0.0;
  return from_chart(shape, x);
}

}  // namespace

TEST(Carnot, GroupLawExamples) {
  const auto p = group_mul(heis(1, 0, 0), heis(0, 1, 0));
  EXPECT_EQ(to_chart(HalfSpacePoint::at(p)), (std::vector<double>{1, 1, -2, 0}));
  const auto inv = group_inv(p);
  EXPECT_EQ(to_chart(HalfSpacePoint::at(inv)), (std::vector<double>{-1, -1, 2, 0}));
  const auto e = CarnotPoint::identity(kHeis);
  EXPECT_EQ(to_chart(HalfSpacePoint::at(group_mul(p, e))), to_chart(HalfSpacePoint::at(p)));
  EXPECT_EQ(to_chart(HalfSpacePoint::at(group_mul(p, inv))), (std::vector<double>{0, 0, 0, 0}));

  const CarnotShape r{Algebra::Real, 2};
  const auto x = from_chart(r, std::vector<double>{0.25, 0}).base();
  const auto y = from_chart(r, std::vector<double>{0.5, 0}).base();
  EXPECT_EQ(to_chart(HalfSpacePoint::at(group_mul(x, y))), (std::vector<double>{0.75, 0}));
}

TEST(Carnot, TranslateAndDilateExamples) {
  const CarnotShape r{Algebra::Real, 2};
  const auto p = from_chart(r, std::vector<double>{0, 5});
  const auto g = from_chart(r, std::vector<double>{1, 0}).base();
  EXPECT_EQ(to_chart(translate(g, p)), (std::vector<double>{1, 5}));

  const auto h = HalfSpacePoint::at(heis(1, 2, 3), 4);
  EXPECT_EQ(to_chart(dilate(2.0, h)), (std::vector<double>{2, 4, 12, 16}));
  EXPECT_EQ(to_chart(dilate(1.0, h)), to_chart(h));
  EXPECT_EQ(to_chart(dilate(c(0, 1), HalfSpacePoint::at(heis(1, 0, 0)))), (std::vector<double>{0, 1, 0, 0}));
  EXPECT_THROW(dilate(0.0, h), Error);
}

TEST(Carnot, NormAndDistanceExamples) {
  EXPECT_DOUBLE_EQ(kc_norm(HalfSpacePoint::at(heis(0, 0, 4))), 2.0);
  EXPECT_DOUBLE_EQ(kc_norm(HalfSpacePoint::origin(kHeis)), 0.0);
  EXPECT_DOUBLE_EQ(kc_norm(HalfSpacePoint::at(heis(1, 0, 0))), 1.0);
  const auto o = HalfSpacePoint::origin(kHeis);
  EXPECT_DOUBLE_EQ(kc_dist(o, HalfSpacePoint::at(heis(1, 0, 0))), 1.0);
  EXPECT_DOUBLE_EQ(kc_dist(o, HalfSpacePoint::at(heis(0, 0, 4))), 2.0);
  const auto p = HalfSpacePoint::at(heis(0.3, -0.2, 0.7), 0.4);
  EXPECT_EQ(kc_dist(p, p), 0.0);
}

TEST(Carnot, ChartRoundTripAndNegativeHeight) {
  const CarnotShape h{Algebra::Quaternion, 3};
  EXPECT_EQ(h.dim(), 11);
  Rng rng(5);
  const auto p = random_point(h, rng, 1.0);
  EXPECT_EQ(from_chart(h, to_chart(p)).u, p.u);
  EXPECT_EQ(to_chart(from_chart(h, to_chart(p))), to_chart(p));
  std::vector<double> bad(12, 0.0);
  bad.back() = -1.0;
  EXPECT_THROW(from_chart(h, bad), Error);
  EXPECT_THROW(from_chart(h, std::vector<double>(3, 0.0)), Error);
}

TEST(CarnotProperty, HeisenbergMatchesComplexOracle) {
  Rng rng(17);
  for (int s = 0; s < 2000; ++s) {
    const oracle::Heis a{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1)};
    const oracle::Heis b{{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1)};
    const auto pa = heis(a.z.real(), a.z.imag(), a.s);
    const auto pb = heis(b.z.real(), b.z.imag(), b.s);
    const auto m = oracle::heis_mul(a, b);
    const auto got = to_chart(HalfSpacePoint::at(group_mul(pa, pb)));
    EXPECT_NEAR(got[0], m.z.real(), 1e-15);
    EXPECT_NEAR(got[1], m.z.imag(), 1e-15);
    EXPECT_NEAR(got[2], m.s, 1e-14);
    EXPECT_NEAR(kc_dist(pa, pb), oracle::heis_dist(a, b), 1e-13);
  }
}

TEST(CarnotProperty, MetricAxiomsOnEachAlgebra) {
  for (Algebra alg : {Algebra::Real, Algebra::Complex, Algebra::Quaternion}) {
    const CarnotShape shape{alg, 3};
    Rng rng(23, static_cast<std::uint64_t>(alg));
    for (int s = 0; s < 2000; ++s) {
      const auto p = random_point(shape, rng, 0.0);
      const auto q = random_point(shape, rng, 0.0);
      const auto r = random_point(shape, rng, 0.0);
      const auto g = random_point(shape, rng, 0.0).base();
      EXPECT_NEAR(kc_dist(p, q), kc_dist(q, p), 1e-13);
      EXPECT_LE(kc_dist(p, r), kc_dist(p, q) + kc_dist(q, r) + 1e-12);
      EXPECT_NEAR(kc_dist(translate(g, p), translate(g, q)), kc_dist(p, q), 1e-12);
      const double lam = rng.uniform(0.5, 2.0);
      EXPECT_NEAR(kc_dist(dilate(lam, p), dilate(lam, q)), lam * kc_dist(p, q), 1e-12);
      const auto back = translate(group_inv(g), translate(g, p));
      for (auto [x, y] : {std::pair{to_chart(back), to_chart(p)}}) {
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], y[i], 1e-14);
      }
    }
  }
}

TEST(CarnotProperty, DistanceOnHorospheresIgnoresHeight) {
  Rng rng(29);
  for (int s = 0; s < 500; ++s) {
    const auto p = random_point(kHeis, rng, 0.0);
    const auto q = random_point(kHeis, rng, 0.0);
    const double h = rng.uniform(0.0, 3.0);
    EXPECT_NEAR(kc_dist(HalfSpacePoint::at(p.base(), h), HalfSpacePoint::at(q.base(), h)), kc_dist(p, q), 1e-13);
  }
}
