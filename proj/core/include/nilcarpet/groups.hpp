#pragma once

// The groups Gamma = E * H: E a lattice of Carnot translations with the
// column over Q as fundamental domain, H generated by inversions in the
// packed balls. Deformations Gamma_t are built generator by generator from
// the stretch map.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilcarpet/carnot.hpp"
#include "nilcarpet/carpet.hpp"
#include "nilcarpet/hyperbolic.hpp"
#include "nilcarpet/packing.hpp"
#include "nilcarpet/random.hpp"
#include "nilcarpet/stretch.hpp"

namespace nilcarpet {

struct GroupBall {
  Ball ball;
  std::size_t packing_index = 0;
  Box cell_box;
};

/// Central lattice element [T_a, T_b] = T_a T_b T_a^{-1} T_b^{-1} spanning
/// one vertical axis.
struct CentralStep {
  std::size_t a = 0;
  std::size_t b = 0;
  CarnotPoint step;
};

struct GroupSpec {
  CarnotShape shape;
  CarpetSpec carpet;
  int pack_depth = 0;
  std::vector<CarnotPoint> lattice;   // horizontal unit steps
  std::vector<CentralStep> central;   // one per vertical axis (empty for R)
  std::vector<GroupBall> balls;       // generators of H
  std::vector<GroupBall> excluded;    // balls left without a generator
  std::vector<double> column_lo;      // chart box of the fundamental column
  std::vector<double> column_hi;

  /// Full sphere as limit set exactly when no ball was excluded.
  bool full_limit_set() const noexcept { return excluded.empty(); }
  /// Generator balls sorted by first coordinate, for side queries.
  std::vector<std::size_t> x1_order;
  double max_radius = 0.0;
};

/// E from the lattice steps, H from the non-excluded packed balls.
GroupSpec build_group(const Packing& packing);

// ------------------------------------------------------------------ words

struct Letter {
  enum class Kind : std::uint8_t { lattice, central, inversion };
  Kind kind = Kind::lattice;
  std::size_t index = 0;
  long exponent = 1;  // always 1 for inversions

  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

Word inverse_word(const Word& w);
/// Merges adjacent powers of one generator and cancels I_i I_i.
Word freely_reduce(const Word& w);
std::string to_string(const Word& w);

/// Left-to-right evaluation: the first letter acts first.
HalfSpacePoint apply_word(const GroupSpec& g, const Word& w, const HalfSpacePoint& p);
Isometry to_isometry(const GroupSpec& g, const Word& w);

// ------------------------------------------------------------- polyhedron

bool in_column(const GroupSpec& g, const HalfSpacePoint& p);
/// Indices of generator balls whose side test classifies p as `inside`.
std::vector<std::size_t> balls_containing(const GroupSpec& g, const HalfSpacePoint& p);
/// In the column and strictly outside every generator ball.
bool in_polyhedron(const GroupSpec& g, const HalfSpacePoint& p);

struct Reduction {
  Word word;            // apply_word(g, word, point) recovers the input
  HalfSpacePoint point;
  int steps = 0;
};

/// Greedy reduction: lattice moves into the column, then an inversion out of
/// any ball containing the point, repeated. Throws ErrorCode::not_converged
/// after max_steps moves.
Reduction reduce(const GroupSpec& g, const HalfSpacePoint& p, int max_steps = 1000);

// ------------------------------------------------------------ deformation

struct Deformation {
  StretchMap map;
  GroupSpec group;
  std::vector<double> ball_shift;      // c for each generator ball
  std::vector<double> excluded_shift;  // c for each excluded ball
};

/// E_t: the first-axis step becomes t_1; H_t: each ball translated by
/// T_{c e_1} for its cell, radius unchanged.
Deformation deform(const GroupSpec& g, const StretchMap& map);

// ----------------------------------------------------------------- checks

struct KleinReport {
  std::uint64_t samples = 0;
  std::uint64_t inversion_failures = 0;  // I_i p not inside B_i for p in P
  std::uint64_t overlap_failures = 0;    // generator balls not disjoint
  std::uint64_t lattice_failures = 0;    // lattice image meeting the open column
  std::vector<std::string> failures;     // first few, described

  std::uint64_t total_failures() const noexcept {
    return inversion_failures + overlap_failures + lattice_failures;
  }
};

KleinReport klein_check(const GroupSpec& g, std::uint64_t samples, std::uint64_t seed);

struct EquivarianceReport {
  std::uint64_t samples = 0;
  double max_deviation = 0.0;  // chart distance between f_t(gamma p) and gamma_t(f_t p)
  std::string worst_generator;
};

/// Checks f_t o gamma = gamma_t o f_t for every generator on samples from
/// the opposite column faces (lattice) or the ball boundary (inversions).
EquivarianceReport equivariance(const GroupSpec& g, const Deformation& d,
                                std::uint64_t samples_per_generator, std::uint64_t seed);

struct WitnessSide {
  double t = 1.0;
  TranslationLength length;
};

struct WitnessReport {
  std::size_t ball_i = 0;  // generator indices
  std::size_t ball_j = 0;
  WitnessSide first;
  WitnessSide second;
  double difference = 0.0;  // |l_t' - l_t|
  double error = 0.0;       // sum of the two estimator errors
  bool separated = false;   // difference > 3 * error
};

/// First generator pair (i < j) whose centers project into different gap
/// components. Empty when none exists.
std::optional<std::pair<std::size_t, std::size_t>> witness_pair(const GroupSpec& g);

/// Translation lengths of I_i I_j in Gamma_t and Gamma_t'. Throws
/// ErrorCode::inconsistent when no qualifying pair exists.
WitnessReport nontriviality_witness(const GroupSpec& g, double t, double t_prime, int n_iter = 16);
/// Same with an explicit pair, in the given order.
WitnessReport nontriviality_witness(const GroupSpec& g, std::size_t i, std::size_t j, double t,
                                    double t_prime, int n_iter = 16);

struct BoundaryTrivialityReport {
  std::uint64_t column_samples = 0;
  std::uint64_t column_mismatches = 0;   // f_t(p) != T_c p exactly
  double max_column_deviation = 0.0;
  std::vector<double> shifts;            // c per excluded ball
  bool seeds_in_polyhedron = true;       // excluded centers lie in P(Gamma)
  std::uint64_t gap_samples = 0;
  std::uint64_t gap_slope_failures = 0;     // slope != 1 inside Delta_1
  std::uint64_t carpet_samples = 0;
  std::uint64_t carpet_slope_failures = 0;  // slope == 1 off Delta_1 with t != 1
};

/// Requires at least one excluded ball.
BoundaryTrivialityReport boundary_triviality_check(const GroupSpec& g, const Deformation& d,
                                                   std::uint64_t samples, std::uint64_t seed);

/// Random word in normal form for E * H: no two lattice letters adjacent
/// and no inversion repeated. Such a word is nontrivial in Gamma.
Word random_word(const GroupSpec& g, int length, Rng& rng);

/// Random point on the unit gauge sphere |xi|^4 + |v|^2 = 1
/// at u = 0.
HalfSpacePoint sample_unit_sphere(const CarnotShape& shape, Rng& rng);

}  // namespace nilcarpet
