#include "nilcarpet/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"

namespace nilcarpet {

namespace {

double first_coord(const CarnotPoint& p) { return p.xi.size() ? p.xi[0].re() : 0.0; }

// max over s in [0, r] of sqrt(r^4 - s^4) + 2 a s. With w = s^2 the critical
// point solves w^3 + a^2 w^2 = a^2 r^4; Newton from w = r^2 descends
// monotonically onto the single positive root.
double vertical_reach(double r, double a) {
  const double r2 = r * r;
  if (a == 0.0) return r2;
  const double a2 = a * a;
  const double target = a2 * r2 * r2;
  double w = r2;
  for (int it = 0; it < 100; ++it) {
    const double p = w * w * (w + a2) - target;
    const double next = w - p / (w * (3.0 * w + 2.0 * a2));
    if (!(next < w)) break;
    w = next;
  }
  return std::sqrt(std::max(0.0, r2 * r2 - w * w)) + 2.0 * a * std::sqrt(w);
}

HalfSpacePoint boundary_point(const CarnotShape& shape, std::span<const double> x) {
  std::vector<double> chart(x.begin(), x.end());
  chart.push_back(0.0);
  return from_chart(shape, chart);
}

// Accepted balls split into a short list of large ones, always scanned, and
// small ones sorted by first coordinate and scanned in a window.
class NeighborIndex {
 public:
  explicit NeighborIndex(double small_radius) : tau_(small_radius) {}

  void add(const Ball& b, std::size_t id) {
    if (b.radius > tau_) {
      large_.push_back({b, id});
      return;
    }
    Entry e{b, id};
    const double x = first_coord(b.center);
    auto it = std::upper_bound(small_.begin(), small_.end(), x,
                               [](double v, const Entry& s) { return v < first_coord(s.ball.center); });
    small_.insert(it, e);
  }

  /// min_j (rho_c(c, c_j) - r_j) over balls that could be closer than
  /// `reach`; returns +inf when none can.
  double clearance(const CarnotPoint& c, double reach) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : large_) best = std::min(best, kc_dist(c, e.ball.center) - e.ball.radius);
    const double x = first_coord(c);
    const double w = reach + tau_;
    auto it = std::lower_bound(small_.begin(), small_.end(), x - w,
                               [](const Entry& s, double v) { return first_coord(s.ball.center) < v; });
    for (; it != small_.end() && first_coord(it->ball.center) <= x + w; ++it) {
      best = std::min(best, kc_dist(c, it->ball.center) - it->ball.radius);
    }
    return best;
  }

 private:
  struct Entry {
    Ball ball;
    std::size_t id;
  };
  double tau_;
  std::vector<Entry> large_;
  std::vector<Entry> small_;
};

std::vector<Box> children(const Box& b) {
  const std::size_t dim = b.dim();
  std::vector<Box> out;
  out.reserve(std::size_t{1} << dim);
  for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
    Box c;
    c.center = b.center;
    c.half_width.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      // Axis 0 is the most significant bit, matching the cell ordering.
      const bool upper = (mask >> (dim - 1 - i)) & 1U;
      c.half_width[i] = 0.5 * b.half_width[i];
      c.center[i] += upper ? c.half_width[i] : -c.half_width[i];
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

double kc_inradius(const CarnotShape& shape, const Box& box) {
  const auto hd = static_cast<std::size_t>(shape.horizontal_dim());
  const auto dim = static_cast<std::size_t>(shape.dim());
  if (box.dim() != dim) fail(ErrorCode::dimension_mismatch, "box dimension does not match shape");
  for (double h : box.half_width) {
    if (!(h > 0.0)) fail(ErrorCode::degenerate, "box has a nonpositive half-width");
  }
  double hx = std::numeric_limits<double>::infinity();
  double hv = std::numeric_limits<double>::infinity();
  double a2 = 0.0;
  for (std::size_t i = 0; i < hd; ++i) {
    hx = std::min(hx, box.half_width[i]);
    a2 += box.center[i] * box.center[i];
  }
  for (std::size_t i = hd; i < dim; ++i) hv = std::min(hv, box.half_width[i]);
  if (hd == dim) return hx;
  const double a = std::sqrt(a2);
  double hi = std::min(hx, std::sqrt(hv));
  if (vertical_reach(hi, a) <= hv) return hi;
  double lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (vertical_reach(mid, a) <= hv ? lo : hi) = mid;
  }
  return lo;
}

CarnotPoint chart_point(const CarnotShape& shape, std::span<const double> center) {
  return boundary_point(shape, center).base();
}

Ball inscribe_ball(const CarnotShape& shape, const Box& box, double safety) {
  return {chart_point(shape, box.center), safety * kc_inradius(shape, box)};
}

std::vector<std::size_t> Packing::excluded_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (balls[i].excluded) out.push_back(i);
  }
  return out;
}

std::size_t Packing::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(balls.begin(), balls.end(), [](const PackedBall& b) { return !b.excluded; }));
}

Packing pack(const CarnotShape& shape, const CarpetSpec& carpet, int pack_depth, double cap) {
  if (pack_depth < 0) fail(ErrorCode::invalid_argument, "pack_depth must be >= 0");
  if (carpet.dim != shape.dim()) {
    fail(ErrorCode::dimension_mismatch, "carpet dimension does not match the Carnot group");
  }
  Packing out;
  out.shape = shape;
  out.carpet = carpet;
  out.pack_depth = pack_depth;
  out.cells = removed_cells(carpet, cap);
  const double per_cell = std::pow(2.0, static_cast<double>(carpet.dim * pack_depth));
  if (per_cell * static_cast<double>(out.cells.size()) > 1e7) {
    fail(ErrorCode::cap_exceeded, "packing candidate count exceeds 1e7; lower pack_depth");
  }

  // Smallest main-ball scale; sub-balls are never larger than their cell.
  double tau = std::numeric_limits<double>::infinity();
  for (const auto& c : out.cells) tau = std::min(tau, c.box.half_width[0]);
  NeighborIndex index(tau);

  struct Candidate {
    std::size_t cell;
    Box box;
    double inradius = 0.0;
  };
  std::vector<Candidate> level;
  level.reserve(out.cells.size());
  for (std::size_t i = 0; i < out.cells.size(); ++i) level.push_back({i, out.cells[i].box});

  for (int depth = 0; depth <= pack_depth; ++depth) {
    if (depth > 0) {
      std::vector<Candidate> next;
      next.reserve(level.size() << carpet.dim);
      for (const auto& c : level) {
        for (auto& b : children(c.box)) next.push_back({c.cell, std::move(b)});
      }
      level = std::move(next);
    }
    constexpr std::size_t kChunk = 256;
    parallel_chunks((level.size() + kChunk - 1) / kChunk, [&](std::size_t chunk) {
      const std::size_t end = std::min(level.size(), (chunk + 1) * kChunk);
      for (std::size_t i = chunk * kChunk; i < end; ++i) level[i].inradius = kc_inradius(shape, level[i].box);
    });
    for (const auto& c : level) {
      const CarnotPoint center = chart_point(shape, c.box.center);
      const double r_in = kPackingSafety * c.inradius;
      const double clear = index.clearance(center, r_in / kPackingSafety);
      const double r = std::min(r_in, kPackingSafety * clear);
      const bool accept = depth == 0 ? r > 0.0 : r > 0.25 * c.inradius;
      if (!accept) continue;
      PackedBall pb{{center, r}, c.cell, depth, false};
      index.add(pb.ball, out.balls.size());
      out.balls.push_back(std::move(pb));
    }
  }
  return out;
}

McEstimate coverage_mc(const Packing& packing, std::uint64_t samples, std::uint64_t seed) {
  McEstimate est;
  est.samples = samples;
  if (packing.balls.empty() || packing.cells.empty() || samples == 0) return est;
  std::vector<double> cum(packing.cells.size());
  double total = 0.0;
  for (std::size_t i = 0; i < packing.cells.size(); ++i) {
    total += packing.cells[i].box.volume();
    cum[i] = total;
  }
  std::vector<std::vector<std::size_t>> by_cell(packing.cells.size());
  for (std::size_t i = 0; i < packing.balls.size(); ++i) by_cell[packing.balls[i].cell].push_back(i);

  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(n_chunks, 0);
  const auto dim = static_cast<std::size_t>(packing.carpet.dim);
  parallel_chunks(n_chunks, [&](std::size_t chunk) {
    Rng rng(seed, chunk);
    std::vector<double> x(dim);
    std::uint64_t h = 0;
    const std::uint64_t end = std::min(samples, (chunk + 1) * kChunk);
    for (std::uint64_t s = chunk * kChunk; s < end; ++s) {
      const double pick = rng.uniform() * total;
      auto it = std::upper_bound(cum.begin(), cum.end(), pick);
      const auto ci = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
      const Box& box = packing.cells[ci].box;
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] = box.center[i] + box.half_width[i] * rng.uniform(-1.0, 1.0);
      }
      const auto p = boundary_point(packing.shape, x);
      for (std::size_t b : by_cell[ci]) {
        const auto& ball = packing.balls[b].ball;
        if (kc_dist(HalfSpacePoint::at(ball.center), p) <= ball.radius) {
          ++h;
          break;
        }
      }
    }
    hits[chunk] = h;
  });
  const auto hit_total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  est.estimate = static_cast<double>(hit_total) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(samples));
  return est;
}

Packing exclude(const Packing& packing, const std::vector<std::size_t>& indices) {
  Packing out = packing;
  for (std::size_t i : indices) {
    if (i >= out.balls.size()) {
      fail(ErrorCode::out_of_range, "excluded ball index " + std::to_string(i) + " out of range");
    }
    out.balls[i].excluded = true;
  }
  return out;
}

DisjointnessReport check_disjointness(const std::vector<Ball>& balls) {
  DisjointnessReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return first_coord(balls[a].center) < first_coord(balls[b].center);
  });
  double r_max = 0.0;
  for (const auto& b : balls) r_max = std::max(r_max, b.radius);
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Ball& bi = balls[order[a]];
    const double xi = first_coord(bi.center);
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Ball& bj = balls[order[b]];
      const double dx = first_coord(bj.center) - xi;
      if (dx > bi.radius + r_max) break;
      if (dx > bi.radius + bj.radius) continue;
      ++rep.pairs_tested;
      const double margin = kc_dist(bi.center, bj.center) - bi.radius - bj.radius;
      rep.min_margin = std::min(rep.min_margin, margin);
      if (!(kc_dist(bi.center, bj.center) > bi.radius + bj.radius)) ++rep.violations;
    }
  }
  return rep;
}

DisjointnessReport check_disjointness(const Packing& packing) {
  std::vector<Ball> balls;
  balls.reserve(packing.balls.size());
  for (const auto& b : packing.balls) balls.push_back(b.ball);
  return check_disjointness(balls);
}

}  // namespace nilcarpet
