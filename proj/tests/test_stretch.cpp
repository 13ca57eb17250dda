#include <gtest/gtest.h>

#include <cmath>

#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"
#include "nilcarpet/stretch.hpp"
#include "oracle.hpp"

using namespace nilcarpet;

namespace {

CarpetSpec spec(int dim, std::vector<int> k) {
  CarpetSpec s;
  s.dim = dim;
  s.depth = static_cast<int>(k.size());
  s.k_seq = std::move(k);
  return s;
}

const CarpetSpec kOne = spec(2, {3});

}  // namespace

TEST(Stretch, DensityExamples) {
  const auto m = StretchMap::from_carpet(kOne, 2.0);
  EXPECT_EQ(m.phi(0.0), 1.0);
  EXPECT_EQ(m.phi(0.4), 2.0);
}

TEST(Stretch, PsiExamples) {
  const auto m = StretchMap::from_carpet(kOne, 2.0);
  EXPECT_NEAR(m.psi(0.5), 5.0 / 6.0, 1e-15);
  EXPECT_EQ(m.psi(0.1), 0.1);
  EXPECT_NEAR(m.t1(), 5.0 / 3.0, 1e-15);
  EXPECT_EQ(StretchMap::from_carpet(kOne, 1.0).t1(), 1.0);
  const auto id = StretchMap::from_carpet(spec(2, {3, 9, 27}), 1.0);
  Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-0.5, 0.5);
    EXPECT_EQ(id.psi(x), x);
  }
}

TEST(Stretch, BoundaryMapExamples) {
  const CarnotShape shape{Algebra::Real, 3};
  const auto m = StretchMap::from_carpet(kOne, 2.0);
  const auto p = from_chart(shape, std::vector<double>{0.5, 0.0, 0.7});
  const auto fp = to_chart(m.apply(p));
  EXPECT_NEAR(fp[0], 5.0 / 6.0, 1e-15);
  EXPECT_EQ(fp[1], 0.0);
  EXPECT_EQ(fp[2], 0.7);
  const auto inside = from_chart(shape, std::vector<double>{0.1, 0.2, 0.0});
  EXPECT_EQ(to_chart(m.apply(inside)), to_chart(inside));
  EXPECT_THROW(m.apply(from_chart(shape, std::vector<double>{0.6, 0.0, 0.0})), Error);
}

TEST(Stretch, CellTranslationExamples) {
  const auto cells = removed_cells(kOne);
  EXPECT_EQ(StretchMap::from_carpet(kOne, 3.0).cell_translation(cells[0].box), 0.0);

  const auto s2 = spec(2, {3, 9});
  const auto m = StretchMap::from_carpet(s2, 2.0);
  const auto level2 = removed_cells(s2);
  EXPECT_LT(m.cell_translation(level2[1].box), 0.0);  // left of center
  Box straddle{{0.0, 0.0}, {0.3, 0.1}};
  try {
    (void)m.cell_translation(straddle);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inconsistent);
  }
}

TEST(Stretch, RejectsNonPositiveT) {
  EXPECT_THROW(StretchMap::from_carpet(kOne, 0.0), Error);
  EXPECT_THROW(StretchMap::from_carpet(kOne, -1.0), Error);
}

TEST(StretchProperty, PsiMatchesQuadratureOfDensity) {
  for (double t : {0.5, 2.0, 3.7}) {
    const auto s = spec(2, {3, 9, 27});
    const auto m = StretchMap::from_carpet(s, t);
    const auto gaps = project_delta1(s);
    auto density = [&](double y) { return gaps.contains(y) ? 1.0 : t; };
    const double psi_lo = m.psi(-0.5);
    constexpr int kCells = 200000;
    // The midpoint rule is exact except in the cells holding a jump of the density.
    const double jump_tol = 2.0 * static_cast<double>(gaps.intervals().size()) * std::abs(t - 1.0) / kCells;
    for (double x : {-0.45, -0.2, 0.0, 0.13, 0.31, 0.5}) {
      const double ref = oracle::integrate(density, -0.5, x, kCells);
      EXPECT_NEAR(m.psi(x) - psi_lo, ref, jump_tol + 1e-12) << "t=" << t << " x=" << x;
    }
    EXPECT_NEAR(m.t1(), gaps.measure() + t * (1 - gaps.measure()), 1e-14);
  }
}

TEST(StretchProperty, MonotoneInvertibleWithBoundedSlope) {
  const auto s = spec(2, {3, 9, 27});
  for (double t : {0.3, 0.5, 2.0, 5.0}) {
    const auto m = StretchMap::from_carpet(s, t);
    Rng rng(73);
    double prev_x = -0.5, prev = m.psi(-0.5);
    for (int i = 0; i < 2000; ++i) {
      const double x = prev_x + rng.uniform(0.0, 0.0005);
      if (x > 0.5) break;
      EXPECT_GE(m.psi(x), prev);
      const double y = m.psi(x);
      EXPECT_NEAR(m.psi_inverse(y), x, 1e-14 * std::max(1.0, 1.0 / t));
      prev = y;
      prev_x = x;
    }
    for (int i = 0; i < 500; ++i) {
      const double x = rng.uniform(-0.5, 0.49);
      const double slope = m.local_slope(x);
      EXPECT_GE(slope, std::min(1.0, t) - 1e-6);
      EXPECT_LE(slope, std::max(1.0, t) + 1e-6);
    }
  }
}

TEST(StretchProperty, T1IncreasesWithT) {
  const auto s = spec(2, {3, 9});
  double prev = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double t1 = StretchMap::from_carpet(s, 0.1 * i).t1();
    EXPECT_GT(t1, prev);
    prev = t1;
  }
}

TEST(StretchProperty, RestrictionToRemovedCellIsOneTranslation) {
  const auto s = spec(2, {3, 9, 27});
  const auto m = StretchMap::from_carpet(s, 2.0);
  Rng rng(79);
  for (const auto& cell : removed_cells(s)) {
    const double c = m.cell_translation(cell.box);
    for (int i = 0; i < 20; ++i) {
      const double x = cell.box.center[0] + cell.box.half_width[0] * rng.uniform(-1, 1);
      EXPECT_EQ(m.psi(x), x + c);
    }
  }
}

TEST(StretchProperty, DistortionWithinSlopeBound) {
  const auto m = StretchMap::from_carpet(spec(2, {3, 9}), 2.0);
  const auto r = measure_distortion(m, {Algebra::Real, 3}, 5000, 3);
  EXPECT_GE(r.min_ratio, 1.0 / r.bound - 1e-12);
  EXPECT_LE(r.max_ratio, r.bound + 1e-12);
}
