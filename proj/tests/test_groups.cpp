#include <gtest/gtest.h>

#include <cmath>

#include "nilcarpet/error.hpp"
#include "nilcarpet/groups.hpp"

using namespace nilcarpet;

namespace {

CarpetSpec spec(int dim, std::vector<int> k) {
  CarpetSpec s;
  s.dim = dim;
  s.depth = static_cast<int>(k.size());
  s.k_seq = std::move(k);
  return s;
}

const CarnotShape kR3{Algebra::Real, 3};
const CarnotShape kHeis{Algebra::Complex, 2};

GroupSpec real_group(std::vector<int> k, int d, std::vector<std::size_t> excluded = {}) {
  return build_group(exclude(pack(kR3, spec(2, std::move(k)), d), excluded));
}

HalfSpacePoint at(const CarnotShape& shape, std::vector<double> x) { return from_chart(shape, x); }

Letter lattice(std::size_t i, long e = 1) { return {Letter::Kind::lattice, i, e}; }
Letter inversion(std::size_t i) { return {Letter::Kind::inversion, i, 1}; }

}  // namespace

TEST(Groups, GeneratorCounts) {
  const auto g = real_group({3}, 0);
  EXPECT_EQ(g.lattice.size(), 2u);
  EXPECT_EQ(g.balls.size(), 1u);
  EXPECT_TRUE(g.full_limit_set());
  EXPECT_TRUE(g.central.empty());

  const auto none = real_group({3, 9}, 0, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  EXPECT_TRUE(none.balls.empty());
  EXPECT_FALSE(none.full_limit_set());
}

TEST(Groups, HeisenbergCommutatorIsVertical) {
  const auto g = build_group(pack(kHeis, spec(3, {3}), 0));
  ASSERT_EQ(g.lattice.size(), 2u);
  ASSERT_EQ(g.central.size(), 1u);
  const auto& step = g.central[0].step;
  EXPECT_EQ(step.xi.norm2(), 0.0);
  EXPECT_NEAR(step.v.norm(), 4.0, 1e-15);
  const Word comm{lattice(1, -1), lattice(0, -1), lattice(1), lattice(0)};
  const auto p = at(kHeis, {0.1, 0.2, 0.05, 0.3});
  const auto q = apply_word(g, comm, p);
  const auto x = to_chart(p), y = to_chart(q);
  EXPECT_NEAR(x[0], y[0], 1e-15);
  EXPECT_NEAR(x[1], y[1], 1e-15);
  EXPECT_NEAR(std::abs(y[2] - x[2]), 4.0, 1e-14);
}

TEST(Groups, WordEvaluationExamples) {
  const auto g = real_group({3, 9}, 1);
  const auto p = at(kR3, {0.1, -0.2, 0.3});
  EXPECT_EQ(to_chart(apply_word(g, {}, p)), to_chart(p));
  const auto there_and_back = to_chart(apply_word(g, {lattice(0), lattice(0, -1)}, p));
  for (std::size_t i = 0; i < there_and_back.size(); ++i) EXPECT_NEAR(there_and_back[i], to_chart(p)[i], 1e-15);
  const auto back = to_chart(apply_word(g, {inversion(4), inversion(4)}, p));
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], to_chart(p)[i], 1e-10);
  // Left to right: the first letter acts first.
  const auto w = to_chart(apply_word(g, {lattice(0), inversion(0)}, p));
  const auto v = to_chart(apply_word(g, {inversion(0)}, apply_word(g, {lattice(0)}, p)));
  EXPECT_EQ(w, v);
}

TEST(Groups, FreeReduction) {
  const Word w{lattice(0, 2), lattice(0, -2), inversion(3), inversion(3), lattice(1)};
  EXPECT_EQ(freely_reduce(w), (Word{lattice(1)}));
  EXPECT_EQ(freely_reduce(Word{lattice(0), lattice(0)}), (Word{lattice(0, 2)}));
  const Word u{lattice(0), inversion(2), lattice(1, -3)};
  EXPECT_TRUE(freely_reduce([&] {
                Word x = u;
                const Word inv = inverse_word(u);
                x.insert(x.end(), inv.begin(), inv.end());
                return x;
              }())
                  .empty());
}

TEST(Groups, PolyhedronExamples) {
  const auto g = real_group({3, 9}, 1);
  EXPECT_TRUE(in_polyhedron(g, at(kR3, {0, 0, 10})));
  EXPECT_FALSE(in_polyhedron(g, HalfSpacePoint::at(g.balls[0].ball.center)));
  EXPECT_FALSE(in_polyhedron(g, at(kR3, {0.7, 0, 10})));
  EXPECT_FALSE(in_column(g, at(kR3, {0.7, 0, 10})));
}

TEST(Groups, ReductionExamples) {
  const auto g = real_group({3, 9}, 1);
  const auto q = at(kR3, {0.05, 0.45, 2.0});
  ASSERT_TRUE(in_polyhedron(g, q));
  const auto r0 = reduce(g, q);
  EXPECT_TRUE(r0.word.empty());
  EXPECT_EQ(to_chart(r0.point), to_chart(q));

  const auto p = apply_word(g, {lattice(0)}, q);
  const auto r1 = reduce(g, p);
  EXPECT_EQ(r1.word, (Word{lattice(0)}));
  const auto back = to_chart(apply_word(g, r1.word, r1.point));
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], to_chart(p)[i], 1e-15);

  // More moves needed than allowed: surfaced as an error, not looped.
  // Two lattice moves bring it over the central ball, which needs a third.
  const auto far = at(kR3, {5.02, -6.97, 0.01});
  try {
    reduce(g, far, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_converged);
  }
}

TEST(Groups, DeformationExamples) {
  const auto g = real_group({3}, 0);
  const auto id = deform(g, StretchMap::from_carpet(g.carpet, 1.0));
  EXPECT_EQ(to_chart(HalfSpacePoint::at(id.group.lattice[0])), to_chart(HalfSpacePoint::at(g.lattice[0])));
  EXPECT_EQ(id.ball_shift, (std::vector<double>{0.0}));

  const auto d2 = deform(g, StretchMap::from_carpet(g.carpet, 2.0));
  EXPECT_NEAR(to_chart(HalfSpacePoint::at(d2.group.lattice[0]))[0], 5.0 / 3.0, 1e-15);
  EXPECT_EQ(to_chart(HalfSpacePoint::at(d2.group.lattice[1])), to_chart(HalfSpacePoint::at(g.lattice[1])));
  EXPECT_EQ(d2.ball_shift[0], 0.0);
  EXPECT_EQ(d2.group.balls[0].ball.radius, g.balls[0].ball.radius);
}

TEST(Groups, KleinCheck) {
  const auto g = real_group({3, 9}, 2);
  const auto r = klein_check(g, 3000, 7);
  EXPECT_EQ(r.total_failures(), 0u);
  const auto again = klein_check(g, 3000, 7);
  EXPECT_EQ(again.samples, r.samples);
  EXPECT_EQ(again.failures, r.failures);

  GroupSpec bad = g;
  bad.balls[1].ball.radius *= 3.0;  // now overlaps its neighbours
  EXPECT_GT(klein_check(bad, 1000, 7).overlap_failures, 0u);
}

TEST(Groups, EquivarianceOnRealCarpet) {
  const auto g = real_group({3, 9}, 1);
  for (double t : {0.5, 1.0, 2.0}) {
    const auto d = deform(g, StretchMap::from_carpet(g.carpet, t));
    EXPECT_LE(equivariance(g, d, 200, 3).max_deviation, 1e-9) << "t=" << t;
  }
}

TEST(Groups, NontrivialityWitness) {
  const auto g = real_group({3, 9}, 2);
  const auto pair = witness_pair(g);
  ASSERT_TRUE(pair.has_value());
  const auto w = nontriviality_witness(g, 1.0, 2.0);
  EXPECT_TRUE(w.separated);
  EXPECT_GT(w.difference, 3.0 * w.error);
  // Regression baseline for this configuration, not ground truth.
  EXPECT_NEAR(w.first.length.estimate(), 16.6564299588, 1e-6);
  EXPECT_NEAR(w.second.length.estimate(), 18.5870298084, 1e-6);

  const auto same = nontriviality_witness(g, 2.0, 2.0);
  EXPECT_LE(same.difference, 3.0 * same.error);
  const auto swapped = nontriviality_witness(g, pair->second, pair->first, 2.0, 2.0);
  EXPECT_NEAR(swapped.first.length.estimate(), w.second.length.estimate(),
              3.0 * (swapped.first.length.error + w.second.length.error));

  const auto single = real_group({3}, 0);
  EXPECT_FALSE(witness_pair(single).has_value());
  try {
    nontriviality_witness(single, 1.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inconsistent);
  }
}

TEST(Groups, BoundaryTriviality) {
  const auto central = real_group({3, 9}, 1, {0});
  const auto dc = deform(central, StretchMap::from_carpet(central.carpet, 2.0));
  const auto rc = boundary_triviality_check(central, dc, 1000, 5);
  ASSERT_EQ(rc.shifts.size(), 1u);
  EXPECT_EQ(rc.shifts[0], 0.0);
  EXPECT_EQ(rc.column_mismatches, 0u);

  const auto off = real_group({3, 9}, 1, {1});
  const auto d = deform(off, StretchMap::from_carpet(off.carpet, 2.0));
  const auto r = boundary_triviality_check(off, d, 1000, 5);
  EXPECT_NE(r.shifts[0], 0.0);
  EXPECT_EQ(r.column_samples, 1000u);
  EXPECT_EQ(r.column_mismatches, 0u);
  EXPECT_TRUE(r.seeds_in_polyhedron);
  EXPECT_EQ(r.gap_slope_failures, 0u);
  EXPECT_GT(r.carpet_samples, 0u);
  EXPECT_EQ(r.carpet_slope_failures, 0u);
}

TEST(GroupsProperty, ReductionRoundTrip) {
  const auto g = real_group({3, 9}, 1);
  Rng rng(101);
  for (int s = 0; s < 300; ++s) {
    const auto p = at(kR3, {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.001, 1.0)});
    const auto r = reduce(g, p);
    EXPECT_TRUE(in_column(g, r.point));
    EXPECT_TRUE(balls_containing(g, r.point).empty());
    const auto back = to_chart(apply_word(g, r.word, r.point));
    const auto x = to_chart(p);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-9 * (1 + std::abs(x[i])));
  }
}

TEST(GroupsProperty, NormalFormWordsMoveInteriorPoints) {
  const auto g = real_group({3, 9}, 1);
  Rng rng(103);
  const auto base = at(kR3, {0, 0, 1});
  for (int s = 0; s < 300; ++s) {
    const Word w = random_word(g, 1 + s % 6, rng);
    EXPECT_GT(dist(base, apply_word(g, w, base)), 1e-6) << to_string(w);
  }
}
