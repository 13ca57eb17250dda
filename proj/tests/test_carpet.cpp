#include <gtest/gtest.h>

#include <cmath>

#include "nilcarpet/carpet.hpp"
#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"
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

}  // namespace

TEST(Carpet, RemovedCellExamples) {
  const auto one = removed_cells(spec(2, {3}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].box.center, (std::vector<double>{0, 0}));
  EXPECT_NEAR(one[0].box.half_width[0], 1.0 / 6.0, 1e-16);
  EXPECT_EQ(removed_cells(spec(2, {3, 9})).size(), 9u);
  CarpetSpec zero = spec(2, {3});
  zero.depth = 0;
  EXPECT_THROW(removed_cells(zero), Error);
}

TEST(Carpet, RemovedCellsOrderedByLevelThenAddress) {
  const auto cells = removed_cells(spec(2, {3, 9}));
  EXPECT_EQ(cells[0].id.level, 1);
  for (std::size_t i = 1; i < cells.size(); ++i) {
    EXPECT_EQ(cells[i].id.level, 2);
    if (i > 1) {
      EXPECT_LT(cells[i - 1].id.indices, cells[i].id.indices);
    }
  }
  // Axis 0 most significant: the first level-2 cell is under the lower-left parent.
  EXPECT_LT(cells[1].box.center[0], 0.0);
  EXPECT_LT(cells[1].box.center[1], 0.0);
}

TEST(Carpet, MembershipExamples) {
  const auto s1 = spec(2, {3});
  const auto s2 = spec(2, {3, 9});
  EXPECT_FALSE(contains(s1, std::vector<double>{0, 0}));
  for (const auto& s : {s1, s2, spec(3, {3, 5, 7})}) {
    EXPECT_TRUE(contains(s, std::vector<double>(static_cast<std::size_t>(s.dim), 0.5)));
  }
  // Center of the level-2 cell under the lower-left parent (center -1/3, -1/3).
  const std::vector<double> x{-1.0 / 3.0, -1.0 / 3.0};
  EXPECT_TRUE(contains(s1, x));
  EXPECT_FALSE(contains(s2, x));
  EXPECT_THROW(contains(s1, std::vector<double>{0.7, 0}), Error);
}

TEST(Carpet, MeasureExamples) {
  EXPECT_DOUBLE_EQ(measure_exact(spec(2, {3})), 8.0 / 9.0);
  EXPECT_NEAR(measure_exact(spec(2, {3, 9})), 640.0 / 729.0, 1e-15);
  double prev = 1.0;
  for (int d = 1; d <= 8; ++d) {
    const double m = measure_exact(spec(2, std::vector<int>(static_cast<std::size_t>(d), 3)));
    EXPECT_LT(m, prev);
    prev = m;
  }
  EXPECT_LT(prev, 0.4);
}

TEST(Carpet, MonteCarloExamples) {
  const auto mc = measure_mc(spec(2, {3}), 100000, 1);
  EXPECT_LE(std::abs(mc.estimate - 8.0 / 9.0), 3.0 * std::sqrt(8.0 / 81.0 / 1e5));
  const auto again = measure_mc(spec(2, {3}), 100000, 1);
  EXPECT_EQ(mc.estimate, again.estimate);
  CarpetSpec full = spec(2, {3});
  full.depth = 0;
  EXPECT_EQ(measure_mc(full, 1000, 1).estimate, 1.0);
}

TEST(Carpet, Delta1Examples) {
  const auto d1 = project_delta1(spec(2, {3}));
  ASSERT_EQ(d1.intervals().size(), 1u);
  EXPECT_NEAR(d1.intervals()[0].lo, -1.0 / 6.0, 1e-16);
  EXPECT_NEAR(d1.intervals()[0].hi, 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(d1.measure(), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(project_delta1(spec(2, {3, 9})).measure(), 11.0 / 27.0, 1e-15);
}

TEST(Carpet, IntervalSetMergesOverlapsOnly) {
  const auto s = IntervalSet::from_unsorted({{0.2, 0.3}, {-0.1, 0.0}, {0.0, 0.1}, {0.25, 0.4}});
  ASSERT_EQ(s.intervals().size(), 3u);
  EXPECT_EQ(s.intervals()[2], (Interval{0.2, 0.4}));
  EXPECT_EQ(s.component_of(0.0), -1);
  EXPECT_EQ(s.component_of(0.05), 1);
  EXPECT_FALSE(s.contains(0.4));
}

TEST(Carpet, ValidationRejectsBadSequences) {
  EXPECT_THROW(spec(2, {4}).validate(), Error);
  EXPECT_THROW(spec(2, {1}).validate(), Error);
  EXPECT_THROW(spec(2, {5, 3}).validate(), Error);
  EXPECT_THROW(spec(0, {3}).validate(), Error);
  EXPECT_NO_THROW(spec(2, {3, 3, 3}).validate());
  EXPECT_EQ(CarpetSpec::geometric(2, 3, 3).k_seq, (std::vector<int>{3, 9, 27}));
}

TEST(Carpet, EnumerationCap) {
  try {
    removed_cells(CarpetSpec::geometric(2, 3, 6), 1e6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::cap_exceeded);
  }
}

TEST(Carpet, BoxCountingOnClassicalCarpet) {
  const auto fit = box_count_dimension(spec(2, {3, 3, 3, 3, 3}), 5);
  EXPECT_NEAR(fit.dimension, std::log(8.0) / std::log(3.0), 0.05);
}

TEST(CarpetProperty, MembershipMatchesOracle) {
  for (const auto& s : {spec(2, {3, 9, 27}), spec(3, {3, 5}), spec(2, {3, 3, 3, 3}), spec(1, {3, 9})}) {
    Rng rng(61, static_cast<std::uint64_t>(s.dim * 100 + s.depth));
    std::vector<double> x(static_cast<std::size_t>(s.dim));
    for (int i = 0; i < 20000; ++i) {
      for (auto& v : x) v = rng.uniform(-0.5, 0.5);
      EXPECT_EQ(contains(s, x), oracle::in_carpet(x, s.k_seq, s.depth));
    }
  }
}

TEST(CarpetProperty, MeasureMatchesProductAndMonteCarlo) {
  for (const auto& s : {spec(2, {3, 9}), spec(3, {3, 5}), spec(2, {3, 3, 3}), spec(4, {3, 5})}) {
    const double ref = oracle::carpet_measure(s.k_seq, s.dim);
    EXPECT_NEAR(measure_exact(s), ref, 1e-15);
    const auto mc = measure_mc(s, 100000, 9);
    EXPECT_LE(std::abs(mc.estimate - ref), 3.0 * std::sqrt(ref * (1 - ref) / 1e5));
  }
}

TEST(CarpetProperty, Delta1IsUnionOfCellProjections) {
  for (const auto& s : {spec(2, {3, 9, 27}), spec(3, {3, 5, 7}), spec(2, {5, 5})}) {
    std::vector<Interval> proj;
    for (const auto& c : removed_cells(s)) {
      proj.push_back({c.box.center[0] - c.box.half_width[0], c.box.center[0] + c.box.half_width[0]});
    }
    const auto ref = IntervalSet::from_unsorted(proj);
    const auto got = project_delta1(s);
    EXPECT_NEAR(got.measure(), ref.measure(), 1e-12);
    double keep = 1.0;
    for (int k : s.k_seq) keep *= 1.0 - 1.0 / k;
    EXPECT_NEAR(got.measure(), 1.0 - keep, 1e-12);
    EXPECT_NEAR(delta1_measure_exact(s), 1.0 - keep, 1e-15);
    // Open components are pairwise disjoint and sorted.
    for (std::size_t i = 1; i < got.intervals().size(); ++i) {
      EXPECT_LE(got.intervals()[i - 1].hi, got.intervals()[i].lo);
    }
  }
}

TEST(CarpetProperty, RemovedCellsAreDisjointAndMissTheCarpet) {
  const auto s = spec(2, {3, 9});
  const auto cells = removed_cells(s);
  Rng rng(67);
  for (const auto& c : cells) {
    for (int i = 0; i < 50; ++i) {
      std::vector<double> x(2);
      for (std::size_t a = 0; a < 2; ++a) x[a] = c.box.center[a] + c.box.half_width[a] * rng.uniform(-0.999, 0.999);
      EXPECT_FALSE(contains(s, x));
      int owners = 0;
      for (const auto& d : cells) owners += d.box.contains_open(x) ? 1 : 0;
      EXPECT_EQ(owners, 1);
    }
  }
}
