#include "nilcarpet/groups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"

namespace nilcarpet {

namespace {

constexpr std::size_t kMaxListedFailures = 8;

double first_coord(const CarnotPoint& p) { return p.xi[0].re(); }

CarnotPoint chart_step(const CarnotShape& shape, std::size_t axis, double length) {
  std::vector<double> x(static_cast<std::size_t>(shape.dim()), 0.0);
  x[axis] = length;
  return chart_point(shape, x);
}

CarnotPoint power(const CarnotPoint& step, long k) {
  // Horizontal steps have Im<s, s> = 0 and central ones commute, so T_s^k
  // is the translation by k s.
  CarnotPoint out = step;
  out.xi = static_cast<double>(k) * step.xi;
  out.v = static_cast<double>(k) * step.v;
  return out;
}

CarnotPoint commutator(const CarnotPoint& a, const CarnotPoint& b) {
  // Applying a, b, a^-1, b^-1 in turn is left multiplication by b^-1 a^-1 b a.
  return group_mul(group_inv(b), group_mul(group_inv(a), group_mul(b, a)));
}

void index_balls(GroupSpec& g) {
  g.x1_order.resize(g.balls.size());
  g.max_radius = 0.0;
  for (std::size_t i = 0; i < g.balls.size(); ++i) {
    g.x1_order[i] = i;
    g.max_radius = std::max(g.max_radius, g.balls[i].ball.radius);
  }
  std::stable_sort(g.x1_order.begin(), g.x1_order.end(), [&](std::size_t a, std::size_t b) {
    return first_coord(g.balls[a].ball.center) < first_coord(g.balls[b].ball.center);
  });
}

// For each vertical axis, the commutator of lattice steps with the shortest
// nonzero component along that axis and none along the others.
std::vector<CentralStep> central_steps(const CarnotShape& shape, const std::vector<CarnotPoint>& lattice) {
  std::vector<CentralStep> out;
  for (int axis = 0; axis < shape.vertical_dim(); ++axis) {
    std::optional<CentralStep> best;
    for (std::size_t a = 0; a < lattice.size(); ++a) {
      for (std::size_t b = a + 1; b < lattice.size(); ++b) {
        const CarnotPoint c = commutator(lattice[a], lattice[b]);
        double off = 0.0;
        for (int k = 0; k < shape.vertical_dim(); ++k) {
          if (k != axis) off += std::abs(c.v[k]);
        }
        const double along = std::abs(c.v[axis]);
        if (off > 1e-12 * along || along < 1e-12) continue;
        if (!best || along < std::abs(best->step.v[axis])) best = CentralStep{a, b, c};
      }
    }
    if (!best) fail(ErrorCode::degenerate, "lattice has no commutator along a vertical axis");
    out.push_back(*best);
  }
  return out;
}

void set_vertical_column(GroupSpec& g) {
  const auto hd = static_cast<std::size_t>(g.shape.horizontal_dim());
  for (std::size_t k = 0; k < g.central.size(); ++k) {
    const double period = std::abs(g.central[k].step.v[static_cast<int>(k)]);
    g.column_lo[hd + k] = -0.5 * period;
    g.column_hi[hd + k] = 0.5 * period;
  }
}

HalfSpacePoint random_chart_point(const GroupSpec& g, Rng& rng, double u) {
  std::vector<double> x(g.column_lo.size() + 1);
  for (std::size_t i = 0; i < g.column_lo.size(); ++i) x[i] = rng.uniform(g.column_lo[i], g.column_hi[i]);
  x.back() = u;
  return from_chart(g.shape, x);
}

}  // namespace

HalfSpacePoint sample_unit_sphere(const CarnotShape& shape, Rng& rng) {
  const auto hd = static_cast<std::size_t>(shape.horizontal_dim());
  const auto vd = static_cast<std::size_t>(shape.vertical_dim());
  std::vector<double> x(hd + vd + 1, 0.0);
  double phi = 0.0;
  if (vd > 0) phi = rng.uniform(0.0, 0.5 * std::numbers::pi);
  double n2 = 0.0;
  for (std::size_t i = 0; i < hd; ++i) {
    x[i] = rng.normal();
    n2 += x[i] * x[i];
  }
  const double radius = std::sqrt(std::cos(phi));
  for (std::size_t i = 0; i < hd; ++i) x[i] *= radius / std::sqrt(n2);
  if (vd > 0) {
    double m2 = 0.0;
    for (std::size_t k = 0; k < vd; ++k) {
      x[hd + k] = rng.normal();
      m2 += x[hd + k] * x[hd + k];
    }
    for (std::size_t k = 0; k < vd; ++k) x[hd + k] *= std::sin(phi) / std::sqrt(m2);
  }
  return from_chart(shape, x);
}

GroupSpec build_group(const Packing& packing) {
  const CarnotShape& shape = packing.shape;
  if (packing.carpet.dim != shape.dim()) {
    fail(ErrorCode::inconsistent, "packing carpet does not match the Carnot group");
  }
  if (check_disjointness(packing).violations != 0) {
    fail(ErrorCode::inconsistent, "packing balls are not pairwise disjoint");
  }
  GroupSpec g;
  g.shape = shape;
  g.carpet = packing.carpet;
  g.pack_depth = packing.pack_depth;
  const auto hd = static_cast<std::size_t>(shape.horizontal_dim());
  for (std::size_t h = 0; h < hd; ++h) g.lattice.push_back(chart_step(shape, h, 1.0));
  g.central = central_steps(shape, g.lattice);
  g.column_lo.assign(static_cast<std::size_t>(shape.dim()), -0.5);
  g.column_hi.assign(static_cast<std::size_t>(shape.dim()), 0.5);
  set_vertical_column(g);
  for (std::size_t i = 0; i < packing.balls.size(); ++i) {
    const auto& pb = packing.balls[i];
    GroupBall gb{pb.ball, i, packing.cells[pb.cell].box};
    (pb.excluded ? g.excluded : g.balls).push_back(std::move(gb));
  }
  index_balls(g);
  return g;
}

// ------------------------------------------------------------------ words

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) {
    if (l.kind != Letter::Kind::inversion) l.exponent = -l.exponent;
  }
  return out;
}

Word freely_reduce(const Word& w) {
  Word out;
  for (const auto& l : w) {
    if (l.kind != Letter::Kind::inversion && l.exponent == 0) continue;
    if (!out.empty() && out.back().kind == l.kind && out.back().index == l.index) {
      if (l.kind == Letter::Kind::inversion) {
        out.pop_back();
        continue;
      }
      out.back().exponent += l.exponent;
      if (out.back().exponent == 0) out.pop_back();
      continue;
    }
    out.push_back(l);
  }
  return out;
}

std::string to_string(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    const auto& l = w[i];
    switch (l.kind) {
      case Letter::Kind::lattice: os << 'T' << l.index << '^' << l.exponent; break;
      case Letter::Kind::central: os << 'Z' << l.index << '^' << l.exponent; break;
      case Letter::Kind::inversion: os << 'I' << l.index; break;
    }
  }
  return os.str();
}

namespace {

Primitive to_primitive(const GroupSpec& g, const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::lattice:
      if (l.index >= g.lattice.size()) fail(ErrorCode::out_of_range, "lattice letter out of range");
      return Translate{power(g.lattice[l.index], l.exponent)};
    case Letter::Kind::central:
      if (l.index >= g.central.size()) fail(ErrorCode::out_of_range, "central letter out of range");
      return Translate{power(g.central[l.index].step, l.exponent)};
    case Letter::Kind::inversion:
      if (l.index >= g.balls.size()) fail(ErrorCode::out_of_range, "inversion letter out of range");
      return InvertInBall{g.balls[l.index].ball};
  }
  fail(ErrorCode::invalid_argument, "unknown letter");
}

}  // namespace

HalfSpacePoint apply_word(const GroupSpec& g, const Word& w, const HalfSpacePoint& p) {
  HalfSpacePoint x = p;
  for (const auto& l : w) x = nilcarpet::apply(to_primitive(g, l), x);
  return x;
}

Isometry to_isometry(const GroupSpec& g, const Word& w) {
  std::vector<Primitive> word;
  word.reserve(w.size());
  for (const auto& l : w) word.push_back(to_primitive(g, l));
  return Isometry(std::move(word));
}

// ------------------------------------------------------------- polyhedron

bool in_column(const GroupSpec& g, const HalfSpacePoint& p) {
  const auto x = to_chart(p);
  for (std::size_t i = 0; i < g.column_lo.size(); ++i) {
    if (!(x[i] >= g.column_lo[i] && x[i] <= g.column_hi[i])) return false;
  }
  return true;
}

namespace {

// Generator balls whose side test for p is not `outside`, optionally only
// those with p strictly inside. Inside or on B^+ forces |xi - xi_c| <= r,
// so only a first-coordinate window is scanned.
std::vector<std::size_t> nearby_balls(const GroupSpec& g, const HalfSpacePoint& p, bool strict) {
  std::vector<std::size_t> out;
  if (g.balls.empty()) return out;
  const double x = p.xi[0].re();
  auto it = std::lower_bound(g.x1_order.begin(), g.x1_order.end(), x - g.max_radius,
                             [&](std::size_t i, double v) { return first_coord(g.balls[i].ball.center) < v; });
  for (; it != g.x1_order.end(); ++it) {
    const Ball& b = g.balls[*it].ball;
    if (first_coord(b.center) > x + g.max_radius) break;
    if (std::abs(first_coord(b.center) - x) > b.radius * (1.0 + 1e-9)) continue;
    const Side side = bisector_side(b, p);
    if (side == Side::inside || (!strict && side == Side::on)) out.push_back(*it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::size_t> balls_containing(const GroupSpec& g, const HalfSpacePoint& p) {
  return nearby_balls(g, p, true);
}

bool in_polyhedron(const GroupSpec& g, const HalfSpacePoint& p) {
  return in_column(g, p) && nearby_balls(g, p, false).empty();
}

Reduction reduce(const GroupSpec& g, const HalfSpacePoint& p, int max_steps) {
  if (max_steps < 1) fail(ErrorCode::invalid_argument, "reduce: max_steps must be >= 1");
  Reduction r{{}, p, 0};
  Word applied;
  auto step = [&](const Letter& l) {
    if (++r.steps > max_steps) {
      fail(ErrorCode::not_converged,
           "reduce did not reach the fundamental polyhedron in " + std::to_string(max_steps) + " steps");
    }
    r.point = nilcarpet::apply(to_primitive(g, l), r.point);
    applied.push_back(l);
  };
  const auto hd = static_cast<std::size_t>(g.shape.horizontal_dim());
  while (true) {
    bool moved = false;
    for (std::size_t h = 0; h < hd; ++h) {
      const double x = to_chart(r.point)[h];
      const double lo = g.column_lo[h];
      const double width = g.column_hi[h] - lo;
      if (x >= lo && x <= g.column_hi[h]) continue;
      const auto k = static_cast<long>(std::floor((x - lo) / width));
      if (k != 0) {
        step({Letter::Kind::lattice, h, -k});
        moved = true;
      }
    }
    for (std::size_t k = 0; k < g.central.size(); ++k) {
      const double v = to_chart(r.point)[hd + k];
      const double lo = g.column_lo[hd + k];
      const double width = g.column_hi[hd + k] - lo;
      if (v >= lo && v <= g.column_hi[hd + k]) continue;
      // Central steps are oriented by the sign of their vertical component.
      const double sign = g.central[k].step.v[static_cast<int>(k)] > 0 ? 1.0 : -1.0;
      const auto e = static_cast<long>(std::floor((v - lo) / width));
      if (e != 0) {
        step({Letter::Kind::central, k, static_cast<long>(-sign) * e});
        moved = true;
      }
    }
    if (moved) continue;
    const auto inside = balls_containing(g, r.point);
    if (inside.empty()) break;
    // Leave through the ball that holds the point most deeply.
    std::size_t best = inside.front();
    double depth = std::numeric_limits<double>::infinity();
    for (std::size_t i : inside) {
      const double gauge = kc_norm(normalize_to_unit(g.balls[i].ball, r.point));
      if (gauge < depth) {
        depth = gauge;
        best = i;
      }
    }
    step({Letter::Kind::inversion, best, 1});
  }
  r.word = inverse_word(applied);
  return r;
}

// ------------------------------------------------------------ deformation

Deformation deform(const GroupSpec& g, const StretchMap& map) {
  Deformation d{map, g, {}, {}};
  GroupSpec& gt = d.group;
  const double t1 = map.t1();
  gt.lattice[0] = chart_step(g.shape, 0, t1);
  for (auto& c : gt.central) c.step = commutator(gt.lattice[c.a], gt.lattice[c.b]);
  gt.column_lo[0] = map.psi(-0.5);
  gt.column_hi[0] = map.psi(0.5);
  set_vertical_column(gt);
  auto shift = [&](GroupBall& gb) {
    const double c = map.cell_translation(gb.cell_box);
    gb.ball.center = group_mul(chart_step(g.shape, 0, c), gb.ball.center);
    return c;
  };
  for (auto& gb : gt.balls) d.ball_shift.push_back(shift(gb));
  for (auto& gb : gt.excluded) d.excluded_shift.push_back(shift(gb));
  index_balls(gt);
  return d;
}

// ----------------------------------------------------------------- checks

KleinReport klein_check(const GroupSpec& g, std::uint64_t samples, std::uint64_t seed) {
  KleinReport rep;
  rep.samples = samples;

  std::vector<Ball> balls;
  for (const auto& gb : g.balls) balls.push_back(gb.ball);
  const auto overlap = check_disjointness(balls);
  rep.overlap_failures = overlap.violations;
  if (overlap.violations) rep.failures.push_back("generator balls overlap: " + std::to_string(overlap.violations) + " pairs");

  constexpr std::uint64_t kChunk = 256;
  const std::uint64_t n_chunks = (samples + kChunk - 1) / kChunk;
  struct ChunkResult {
    std::uint64_t inversion = 0;
    std::uint64_t lattice = 0;
    std::vector<std::string> notes;
  };
  std::vector<ChunkResult> results(n_chunks);
  std::vector<Primitive> lattice_moves;
  for (const auto& s : g.lattice) {
    lattice_moves.push_back(Translate{s});
    lattice_moves.push_back(Translate{group_inv(s)});
  }
  for (const auto& c : g.central) {
    lattice_moves.push_back(Translate{c.step});
    lattice_moves.push_back(Translate{group_inv(c.step)});
  }
  auto strictly_inside_column = [&](const HalfSpacePoint& p) {
    const auto x = to_chart(p);
    for (std::size_t i = 0; i < g.column_lo.size(); ++i) {
      if (!(x[i] > g.column_lo[i] && x[i] < g.column_hi[i])) return false;
    }
    return true;
  };
  parallel_chunks(n_chunks, [&](std::size_t chunk) {
    Rng rng(seed, chunk);
    ChunkResult& res = results[chunk];
    const std::uint64_t end = std::min(samples, (chunk + 1) * kChunk);
    for (std::uint64_t s = chunk * kChunk; s < end; ++s) {
      const double u = (s % 2 == 0) ? 0.0 : rng.uniform(0.0, 0.25);
      if (!g.balls.empty()) {
        HalfSpacePoint p = random_chart_point(g, rng, u);
        for (int attempt = 0; attempt < 64 && !in_polyhedron(g, p); ++attempt) p = random_chart_point(g, rng, u);
        if (in_polyhedron(g, p)) {
          const auto i = static_cast<std::size_t>(rng.below(g.balls.size()));
          const auto q = invert_in_ball(g.balls[i].ball, p);
          if (bisector_side(g.balls[i].ball, q) != Side::inside) {
            ++res.inversion;
            if (res.notes.size() < kMaxListedFailures) {
              res.notes.push_back("inversion " + std::to_string(i) + " left a polyhedron point outside its ball");
            }
          }
        }
      }
      if (!lattice_moves.empty()) {
        const HalfSpacePoint p = random_chart_point(g, rng, u);
        const auto m = static_cast<std::size_t>(rng.below(lattice_moves.size()));
        if (strictly_inside_column(p) && strictly_inside_column(nilcarpet::apply(lattice_moves[m], p))) {
          ++res.lattice;
          if (res.notes.size() < kMaxListedFailures) {
            res.notes.push_back("lattice move " + std::to_string(m) + " kept a point in the open column");
          }
        }
      }
    }
  });
  for (auto& r : results) {
    rep.inversion_failures += r.inversion;
    rep.lattice_failures += r.lattice;
    for (auto& n : r.notes) {
      if (rep.failures.size() < kMaxListedFailures) rep.failures.push_back(std::move(n));
    }
  }
  return rep;
}

EquivarianceReport equivariance(const GroupSpec& g, const Deformation& d,
                                std::uint64_t samples_per_generator, std::uint64_t seed) {
  const std::size_t n_lattice = g.lattice.size();
  const std::size_t n_gen = n_lattice + g.balls.size();
  std::vector<double> worst(n_gen, 0.0);
  parallel_chunks(n_gen, [&](std::size_t gen) {
    Rng rng(seed, gen);
    double dev = 0.0;
    for (std::uint64_t s = 0; s < samples_per_generator; ++s) {
      HalfSpacePoint lhs;
      HalfSpacePoint rhs;
      if (gen < n_lattice) {
        auto x = to_chart(random_chart_point(g, rng, 0.0));
        x[gen] = g.column_lo[gen];
        const auto p = from_chart(g.shape, x);
        lhs = d.map.apply(translate(g.lattice[gen], p));
        rhs = translate(d.group.lattice[gen], d.map.apply(p));
      } else {
        const std::size_t i = gen - n_lattice;
        const auto p = denormalize_from_unit(g.balls[i].ball, sample_unit_sphere(g.shape, rng));
        lhs = d.map.apply(invert_in_ball(g.balls[i].ball, p));
        rhs = invert_in_ball(d.group.balls[i].ball, d.map.apply(p));
      }
      dev = std::max(dev, chart_distance(lhs, rhs));
    }
    worst[gen] = dev;
  });
  EquivarianceReport rep;
  rep.samples = samples_per_generator * n_gen;
  for (std::size_t gen = 0; gen < n_gen; ++gen) {
    if (gen > 0 && worst[gen] <= rep.max_deviation) continue;
    rep.max_deviation = worst[gen];
    rep.worst_generator = gen < n_lattice ? "T" + std::to_string(gen) : "I" + std::to_string(gen - n_lattice);
  }
  return rep;
}

std::optional<std::pair<std::size_t, std::size_t>> witness_pair(const GroupSpec& g) {
  const IntervalSet gaps = project_delta1(g.carpet);
  std::vector<int> comp(g.balls.size());
  for (std::size_t i = 0; i < g.balls.size(); ++i) comp[i] = gaps.component_of(first_coord(g.balls[i].ball.center));
  for (std::size_t i = 0; i < g.balls.size(); ++i) {
    if (comp[i] < 0) continue;
    for (std::size_t j = i + 1; j < g.balls.size(); ++j) {
      if (comp[j] >= 0 && comp[j] != comp[i]) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

namespace {

WitnessSide witness_side(const GroupSpec& g, std::size_t i, std::size_t j, double t, int n_iter) {
  const Deformation d = deform(g, StretchMap::from_carpet(g.carpet, t));
  const Ball& bi = d.group.balls[i].ball;
  const Ball& bj = d.group.balls[j].ball;
  const Isometry iso({InvertInBall{bi}, InvertInBall{bj}});
  // Seed above the midpoint of the two centers.
  const FVector mid = 0.5 * (bi.center.xi + bj.center.xi);
  const ImScalar vmid = 0.5 * (bi.center.v + bj.center.v);
  const HalfSpacePoint seed{mid, vmid, 1.0};
  const HalfSpacePoint x0 = axis_point(iso, seed).value_or(seed);
  for (int n = n_iter; n >= 1; n /= 2) {
    try {
      return {t, translation_length(iso, x0, n)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate || n == 1) throw;
    }
  }
  fail(ErrorCode::degenerate, "translation length estimate failed");
}

}  // namespace

WitnessReport nontriviality_witness(const GroupSpec& g, std::size_t i, std::size_t j, double t,
                                    double t_prime, int n_iter) {
  if (i >= g.balls.size() || j >= g.balls.size() || i == j) {
    fail(ErrorCode::out_of_range, "witness needs two distinct generator balls");
  }
  WitnessReport rep;
  rep.ball_i = i;
  rep.ball_j = j;
  rep.first = witness_side(g, i, j, t, n_iter);
  rep.second = witness_side(g, i, j, t_prime, n_iter);
  rep.difference = std::abs(rep.second.length.estimate() - rep.first.length.estimate());
  rep.error = rep.first.length.error + rep.second.length.error;
  rep.separated = rep.difference > 3.0 * rep.error;
  return rep;
}

WitnessReport nontriviality_witness(const GroupSpec& g, double t, double t_prime, int n_iter) {
  const auto pair = witness_pair(g);
  if (!pair) {
    fail(ErrorCode::inconsistent,
         "no two generator balls project into distinct gap components; increase depth");
  }
  return nontriviality_witness(g, pair->first, pair->second, t, t_prime, n_iter);
}

BoundaryTrivialityReport boundary_triviality_check(const GroupSpec& g, const Deformation& d,
                                                   std::uint64_t samples, std::uint64_t seed) {
  if (g.excluded.empty()) fail(ErrorCode::invalid_argument, "boundary triviality needs an excluded ball");
  BoundaryTrivialityReport rep;
  rep.shifts = d.excluded_shift;

  std::vector<Ball> all;
  for (const auto& gb : g.balls) all.push_back(gb.ball);
  for (const auto& gb : g.excluded) {
    rep.seeds_in_polyhedron = rep.seeds_in_polyhedron && in_polyhedron(g, HalfSpacePoint::at(gb.ball.center));
    all.push_back(gb.ball);
  }
  rep.seeds_in_polyhedron = rep.seeds_in_polyhedron && check_disjointness(all).violations == 0;

  const auto dim = static_cast<std::size_t>(g.shape.dim());
  std::vector<std::uint64_t> mism(g.excluded.size(), 0);
  std::vector<double> dev(g.excluded.size(), 0.0);
  parallel_chunks(g.excluded.size(), [&](std::size_t e) {
    Rng rng(seed, e);
    const Box& box = g.excluded[e].cell_box;
    const CarnotPoint shift = chart_step(g.shape, 0, d.excluded_shift[e]);
    std::vector<double> x(dim + 1);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (std::size_t i = 0; i < dim; ++i) x[i] = box.center[i] + box.half_width[i] * rng.uniform(-1.0, 1.0);
      x[dim] = (s % 2 == 0) ? 0.0 : rng.uniform(0.0, 0.1);
      const auto p = from_chart(g.shape, x);
      const auto a = d.map.apply(p);
      const auto b = translate(shift, p);
      const double gap = chart_distance(a, b);
      if (to_chart(a) != to_chart(b)) ++mism[e];
      dev[e] = std::max(dev[e], gap);
    }
  });
  for (std::size_t e = 0; e < g.excluded.size(); ++e) {
    rep.column_samples += samples;
    rep.column_mismatches += mism[e];
    rep.max_column_deviation = std::max(rep.max_column_deviation, dev[e]);
  }

  Rng rng(seed, g.excluded.size());
  constexpr double h = 1e-6;
  const IntervalSet& gaps = d.map.delta1();
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double x = rng.uniform(-0.5, 0.5 - h);
    const int cx = gaps.component_of(x);
    const int ch = gaps.component_of(x + h);
    const double slope = d.map.local_slope(x, h);
    if (cx >= 0 && cx == ch) {
      ++rep.gap_samples;
      if (std::abs(slope - 1.0) > 1e-6) ++rep.gap_slope_failures;
    } else if (cx < 0 && ch < 0 && !gaps.contains(x + 0.5 * h)) {
      ++rep.carpet_samples;
      const bool expect_stretch = d.map.t() != 1.0;
      const bool stretched = std::abs(slope - 1.0) > 1e-6;
      if (expect_stretch != stretched) ++rep.carpet_slope_failures;
    }
  }
  return rep;
}

Word random_word(const GroupSpec& g, int length, Rng& rng) {
  const std::size_t n_lattice = g.lattice.size();
  const std::size_t n = 2 * n_lattice + g.balls.size();
  if (n == 0 || length <= 0) return {};
  Word w;
  while (static_cast<int>(w.size()) < length) {
    const auto pick = static_cast<std::size_t>(rng.below(n));
    Letter l;
    if (pick < 2 * n_lattice) {
      l = {Letter::Kind::lattice, pick / 2, pick % 2 == 0 ? 1L : -1L};
    } else {
      l = {Letter::Kind::inversion, pick - 2 * n_lattice, 1};
    }
    // Adjacent lattice letters would merge into one syllable of E.
    const bool merges = !w.empty() && w.back().kind == l.kind &&
                        (l.kind == Letter::Kind::lattice || w.back().index == l.index);
    if (merges) continue;
    w.push_back(l);
  }
  return w;
}

}  // namespace nilcarpet
