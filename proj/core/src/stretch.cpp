#include "nilcarpet/stretch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"

namespace nilcarpet {

StretchMap::StretchMap(double t, IntervalSet delta1) : t_(t), delta1_(std::move(delta1)) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::invalid_argument, "stretch t must be > 0");
  const auto& gaps = delta1_.intervals();
  if (!gaps.empty() && (gaps.front().lo < -0.5 || gaps.back().hi > 0.5)) {
    fail(ErrorCode::invalid_argument, "gap set leaves [-1/2, 1/2]");
  }
  // Complement of the gaps in [-1/2, 1/2], split at 0.
  std::vector<Interval> comp;
  double cursor = -0.5;
  for (const auto& g : gaps) {
    if (g.lo > cursor) comp.push_back({cursor, g.lo});
    cursor = std::max(cursor, g.hi);
  }
  if (cursor < 0.5) comp.push_back({cursor, 0.5});
  for (const auto& c : comp) {
    if (c.hi > 0.0) pos_.push_back({std::max(c.lo, 0.0), c.hi});
    if (c.lo < 0.0) neg_.push_back({c.lo, std::min(c.hi, 0.0)});
  }
  std::reverse(neg_.begin(), neg_.end());
  pos_cum_.assign(1, 0.0);
  for (const auto& c : pos_) pos_cum_.push_back(pos_cum_.back() + c.length());
  neg_cum_.assign(1, 0.0);
  for (const auto& c : neg_) neg_cum_.push_back(neg_cum_.back() + c.length());
}

StretchMap StretchMap::from_carpet(const CarpetSpec& spec, double t) {
  return StretchMap(t, project_delta1(spec));
}

namespace {

void check_range(double x) {
  if (!(std::abs(x) <= 0.5)) fail(ErrorCode::out_of_range, "coordinate outside [-1/2, 1/2]");
}

}  // namespace

double StretchMap::phi(double y) const {
  check_range(y);
  return delta1_.contains(y) ? 1.0 : t_;
}

double StretchMap::carpet_measure_to(double x) const {
  check_range(x);
  if (x >= 0.0) {
    const auto it = std::upper_bound(pos_.begin(), pos_.end(), x,
                                     [](double v, const Interval& c) { return v < c.hi; });
    const auto k = static_cast<std::size_t>(it - pos_.begin());
    double m = pos_cum_[k];
    if (k < pos_.size() && pos_[k].lo < x) m += x - pos_[k].lo;
    return m;
  }
  const auto it = std::upper_bound(neg_.begin(), neg_.end(), x,
                                   [](double v, const Interval& c) { return v > c.lo; });
  const auto k = static_cast<std::size_t>(it - neg_.begin());
  double m = neg_cum_[k];
  if (k < neg_.size() && neg_[k].hi > x) m += neg_[k].hi - x;
  return -m;
}

double StretchMap::psi(double x) const { return x + (t_ - 1.0) * carpet_measure_to(x); }

double StretchMap::t1() const { return psi(0.5) - psi(-0.5); }

double StretchMap::psi_inverse(double y) const {
  const double lo = psi(-0.5);
  const double hi = psi(0.5);
  if (!(y >= lo && y <= hi)) fail(ErrorCode::out_of_range, "value outside the image of psi");
  std::vector<double> knots{-0.5, 0.0, 0.5};
  for (const auto& g : delta1_.intervals()) {
    knots.push_back(g.lo);
    knots.push_back(g.hi);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::size_t a = 0;
  std::size_t b = knots.size() - 1;
  while (b - a > 1) {
    const std::size_t mid = (a + b) / 2;
    (psi(knots[mid]) <= y ? a : b) = mid;
  }
  const double x0 = knots[a];
  const double slope = phi(0.5 * (knots[a] + knots[b]));
  return std::clamp(x0 + (y - psi(x0)) / slope, knots[a], knots[b]);
}

HalfSpacePoint StretchMap::apply(const HalfSpacePoint& p) const {
  if (p.xi.size() == 0) fail(ErrorCode::dimension_mismatch, "stretch needs a horizontal coordinate");
  auto c = p.xi[0].coords();
  check_range(c[0]);
  c[0] = psi(c[0]);
  HalfSpacePoint out = p;
  out.xi[0] = Scalar(p.xi.algebra(), c);
  return out;
}

double StretchMap::cell_translation(const Box& cell_box) const {
  const double center = cell_box.center.at(0);
  const double half = cell_box.half_width.at(0);
  const int comp = delta1_.component_of(center);
  constexpr double kSlack = 1e-12;
  if (comp < 0) fail(ErrorCode::inconsistent, "cell projection misses the gap set");
  const auto& g = delta1_.intervals()[static_cast<std::size_t>(comp)];
  if (center - half < g.lo - kSlack || center + half > g.hi + kSlack) {
    fail(ErrorCode::inconsistent, "cell projection spans more than one gap component");
  }
  return (t_ - 1.0) * carpet_measure_to(center);
}

double StretchMap::local_slope(double x, double h) const { return (psi(x + h) - psi(x)) / h; }

DistortionReport measure_distortion(const StretchMap& map, const CarnotShape& shape,
                                    std::uint64_t pairs, std::uint64_t seed) {
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t n_chunks = (pairs + kChunk - 1) / kChunk;
  std::vector<std::pair<double, double>> ranges(n_chunks);
  const auto dim = static_cast<std::size_t>(shape.dim());
  parallel_chunks(n_chunks, [&](std::size_t chunk) {
    Rng rng(seed, chunk);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::vector<double> a(dim + 1, 0.0);
    std::vector<double> b(dim + 1, 0.0);
    const std::uint64_t end = std::min(pairs, (chunk + 1) * kChunk);
    for (std::uint64_t s = chunk * kChunk; s < end; ++s) {
      for (std::size_t i = 0; i < dim; ++i) {
        a[i] = rng.uniform(-0.5, 0.5);
        b[i] = rng.uniform(-0.5, 0.5);
      }
      const auto p = from_chart(shape, a);
      const auto q = from_chart(shape, b);
      const double d = kc_dist(p, q);
      if (d == 0.0) continue;
      const double r = kc_dist(map.apply(p), map.apply(q)) / d;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    ranges[chunk] = {lo, hi};
  });
  DistortionReport rep;
  rep.pairs = pairs;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : ranges) {
    rep.min_ratio = std::min(rep.min_ratio, lo);
    rep.max_ratio = std::max(rep.max_ratio, hi);
  }
  rep.bound = std::max(1.0, map.t()) / std::min(1.0, map.t());
  return rep;
}

}  // namespace nilcarpet
