#include "nilcarpet/carpet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nilcarpet/error.hpp"
#include "nilcarpet/random.hpp"

namespace nilcarpet {

CarpetSpec CarpetSpec::geometric(int dim, int base, int depth) {
  CarpetSpec s;
  s.dim = dim;
  s.depth = depth;
  long long k = 1;
  for (int j = 1; j <= depth; ++j) {
    k *= base;
    if (k > 1'000'000'000LL) fail(ErrorCode::invalid_argument, "k_seq: geometric rule overflows");
    s.k_seq.push_back(static_cast<int>(k));
  }
  return s;
}

void CarpetSpec::validate(bool allow_depth0) const {
  if (dim < 1) fail(ErrorCode::invalid_argument, "carpet dim must be >= 1");
  if (depth < (allow_depth0 ? 0 : 1)) {
    fail(ErrorCode::invalid_argument, "carpet depth must be >= 1, got " + std::to_string(depth));
  }
  if (static_cast<int>(k_seq.size()) < depth) {
    fail(ErrorCode::invalid_argument, "k_seq has fewer entries than depth");
  }
  bool constant = true;
  bool increasing = true;
  for (std::size_t j = 0; j < k_seq.size(); ++j) {
    const int k = k_seq[j];
    if (k < 3 || k % 2 == 0) {
      fail(ErrorCode::invalid_argument,
           "k_seq entries must be odd integers >= 3, got " + std::to_string(k));
    }
    if (j > 0) {
      constant = constant && k == k_seq[j - 1];
      increasing = increasing && k > k_seq[j - 1];
    }
  }
  if (!constant && !increasing) {
    fail(ErrorCode::invalid_argument, "k_seq must be strictly increasing or constant");
  }
}

std::span<const std::int32_t> CellId::at_level(int l, int dim) const {
  return std::span<const std::int32_t>(indices).subspan(static_cast<std::size_t>((l - 1) * dim),
                                                        static_cast<std::size_t>(dim));
}

bool Box::contains_open(std::span<const double> x) const noexcept {
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (!(std::abs(x[i] - center[i]) < half_width[i])) return false;
  }
  return true;
}

bool Box::contains_closed(std::span<const double> x) const noexcept {
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (!(std::abs(x[i] - center[i]) <= half_width[i])) return false;
  }
  return true;
}

double Box::volume() const noexcept {
  double v = 1.0;
  for (double h : half_width) v *= 2.0 * h;
  return v;
}

namespace {

void check_cap(const CarpetSpec& spec, double cap) {
  double product = 1.0;
  for (int j = 0; j < spec.depth; ++j) product *= std::pow(spec.k_seq[static_cast<std::size_t>(j)], spec.dim);
  if (product > cap) {
    fail(ErrorCode::cap_exceeded, "carpet enumeration cap exceeded: prod k_j^dim = " +
                                      std::to_string(product) + " > " + std::to_string(cap));
  }
}

struct Enumerator {
  const CarpetSpec& spec;
  std::vector<RemovedCell> out;
  std::vector<std::int32_t> address;
  std::vector<double> lo;

  void descend(int level, double width) {
    const int k = spec.k_seq[static_cast<std::size_t>(level - 1)];
    const int c = (k - 1) / 2;
    const double w = width / k;
    const auto dim = static_cast<std::size_t>(spec.dim);

    RemovedCell cell;
    cell.id.level = level;
    cell.id.indices = address;
    cell.id.indices.insert(cell.id.indices.end(), dim, c);
    cell.box.center.resize(dim);
    cell.box.half_width.assign(dim, 0.5 * w);
    for (std::size_t i = 0; i < dim; ++i) cell.box.center[i] = lo[i] + (c + 0.5) * w;
    out.push_back(std::move(cell));

    if (level == spec.depth) return;

    std::vector<std::int32_t> idx(dim, 0);
    const std::vector<double> base = lo;
    while (true) {
      const bool central = std::all_of(idx.begin(), idx.end(), [c](int i) { return i == c; });
      if (!central) {
        for (std::size_t i = 0; i < dim; ++i) lo[i] = base[i] + idx[i] * w;
        address.insert(address.end(), idx.begin(), idx.end());
        descend(level + 1, w);
        address.resize(address.size() - dim);
      }
      // Odometer with axis 0 most significant.
      std::size_t a = dim;
      while (a > 0) {
        --a;
        if (++idx[a] < k) break;
        idx[a] = 0;
        if (a == 0) {
          lo = base;
          return;
        }
      }
    }
  }
};

}  // namespace

std::vector<RemovedCell> removed_cells(const CarpetSpec& spec, double cap) {
  spec.validate();
  check_cap(spec, cap);
  Enumerator e{spec, {}, {}, std::vector<double>(static_cast<std::size_t>(spec.dim), -0.5)};
  e.descend(1, 1.0);
  std::stable_sort(e.out.begin(), e.out.end(),
                   [](const RemovedCell& a, const RemovedCell& b) { return a.id.level < b.id.level; });
  return std::move(e.out);
}

bool contains(const CarpetSpec& spec, std::span<const double> x) {
  const auto dim = static_cast<std::size_t>(spec.dim);
  if (x.size() != dim) fail(ErrorCode::dimension_mismatch, "carpet point has wrong dimension");
  for (double xi : x) {
    if (!(std::abs(xi) <= 0.5)) fail(ErrorCode::out_of_range, "point outside the cube Q");
  }
  double lo_buf[16];
  std::vector<double> lo_vec;
  double* lo = lo_buf;
  if (dim > 16) {
    lo_vec.assign(dim, -0.5);
    lo = lo_vec.data();
  } else {
    std::fill(lo, lo + dim, -0.5);
  }
  double width = 1.0;
  for (int level = 1; level <= spec.depth; ++level) {
    const int k = spec.k_seq[static_cast<std::size_t>(level - 1)];
    const int c = (k - 1) / 2;
    const double w = width / k;
    bool central = true;
    for (std::size_t i = 0; i < dim; ++i) {
      const double rel = x[i] - lo[i];
      const double c_lo = c * w;
      if (!(rel > c_lo && rel < c_lo + w)) {
        central = false;
        break;
      }
    }
    if (central) return false;
    for (std::size_t i = 0; i < dim; ++i) {
      int idx = static_cast<int>(std::floor((x[i] - lo[i]) / w));
      idx = std::clamp(idx, 0, k - 1);
      lo[i] += idx * w;
    }
    width = w;
  }
  return true;
}

double measure_exact(const CarpetSpec& spec) {
  spec.validate(true);
  double m = 1.0;
  for (int j = 0; j < spec.depth; ++j) {
    m *= 1.0 - std::pow(static_cast<double>(spec.k_seq[static_cast<std::size_t>(j)]), -spec.dim);
  }
  return m;
}

McEstimate measure_mc(const CarpetSpec& spec, std::uint64_t samples, std::uint64_t seed) {
  spec.validate(true);
  constexpr std::uint64_t kChunk = 8192;
  const std::uint64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(n_chunks, 0);
  parallel_chunks(n_chunks, [&](std::size_t chunk) {
    Rng rng(seed, chunk);
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min(samples, begin + kChunk);
    std::vector<double> x(static_cast<std::size_t>(spec.dim));
    std::uint64_t h = 0;
    for (std::uint64_t s = begin; s < end; ++s) {
      for (auto& xi : x) xi = rng.uniform(-0.5, 0.5);
      if (contains(spec, x)) ++h;
    }
    hits[chunk] = h;
  });
  const std::uint64_t total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  McEstimate out;
  out.samples = samples;
  if (samples == 0) return out;
  out.estimate = static_cast<double>(total) / static_cast<double>(samples);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

// ------------------------------------------------------------ intervals

IntervalSet IntervalSet::from_unsorted(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  IntervalSet s;
  for (const auto& iv : intervals) {
    if (!(iv.hi > iv.lo)) continue;
    if (!s.iv_.empty() && iv.lo < s.iv_.back().hi) {
      s.iv_.back().hi = std::max(s.iv_.back().hi, iv.hi);
    } else {
      s.iv_.push_back(iv);
    }
  }
  return s;
}

double IntervalSet::measure() const noexcept {
  double m = 0.0;
  for (const auto& iv : iv_) m += iv.length();
  return m;
}

int IntervalSet::component_of(double x) const noexcept {
  auto it = std::upper_bound(iv_.begin(), iv_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == iv_.begin()) return -1;
  --it;
  if (x > it->lo && x < it->hi) return static_cast<int>(it - iv_.begin());
  return -1;
}

bool IntervalSet::contains(double x) const noexcept { return component_of(x) >= 0; }

IntervalSet project_delta1(const CarpetSpec& spec, double cap) {
  spec.validate();
  double product = 1.0;
  for (int j = 0; j < spec.depth; ++j) product *= spec.k_seq[static_cast<std::size_t>(j)];
  if (product > cap) {
    fail(ErrorCode::cap_exceeded, "first-axis subdivision cap exceeded: prod k_j = " + std::to_string(product) +
                                      " > " + std::to_string(cap));
  }
  std::vector<Interval> gaps;
  std::vector<double> frontier{-0.5};  // lower ends of first-axis cells
  double width = 1.0;
  for (int level = 1; level <= spec.depth; ++level) {
    const int k = spec.k_seq[static_cast<std::size_t>(level - 1)];
    const int c = (k - 1) / 2;
    const double w = width / k;
    std::vector<double> next;
    if (level < spec.depth) next.reserve(frontier.size() * static_cast<std::size_t>(k - 1));
    for (double lo : frontier) {
      gaps.push_back({lo + c * w, lo + (c + 1) * w});
      if (level == spec.depth) continue;
      for (int i = 0; i < k; ++i) {
        // For dim == 1 the central cell is gone; for dim >= 2 its column
        // projects inside the gap just recorded, so skipping it loses nothing.
        if (i != c) next.push_back(lo + i * w);
      }
    }
    frontier = std::move(next);
    width = w;
  }
  return IntervalSet::from_unsorted(std::move(gaps));
}

double delta1_measure_exact(const CarpetSpec& spec) {
  spec.validate(true);
  double keep = 1.0;
  for (int j = 0; j < spec.depth; ++j) keep *= 1.0 - 1.0 / spec.k_seq[static_cast<std::size_t>(j)];
  return 1.0 - keep;
}

BoxCountFit box_count_dimension(const CarpetSpec& spec, int levels) {
  spec.validate();
  if (levels < 2 || levels > static_cast<int>(spec.k_seq.size())) {
    fail(ErrorCode::invalid_argument, "box_count_dimension: need 2 <= levels <= len(k_seq)");
  }
  BoxCountFit fit;
  const auto dim = static_cast<std::size_t>(spec.dim);
  double per_axis = 1.0;
  for (int s = 1; s <= levels; ++s) {
    per_axis *= spec.k_seq[static_cast<std::size_t>(s - 1)];
    const double total = std::pow(per_axis, static_cast<double>(dim));
    if (total > 5e7) fail(ErrorCode::cap_exceeded, "box count grid too large");
    CarpetSpec at_scale = spec;
    at_scale.depth = std::min(s, spec.depth);
    const auto n = static_cast<std::uint64_t>(per_axis);
    const double side = 1.0 / per_axis;
    std::vector<std::uint64_t> idx(dim, 0);
    std::vector<double> x(dim);
    std::uint64_t count = 0;
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(total); ++b) {
      std::uint64_t r = b;
      for (std::size_t i = 0; i < dim; ++i) {
        idx[i] = r % n;
        r /= n;
        x[i] = -0.5 + (static_cast<double>(idx[i]) + 0.5) * side;
      }
      if (contains(at_scale, x)) ++count;
    }
    fit.log_inv_scale.push_back(std::log(per_axis));
    fit.log_count.push_back(std::log(static_cast<double>(count)));
  }
  const double n = static_cast<double>(fit.log_count.size());
  const double mx = std::accumulate(fit.log_inv_scale.begin(), fit.log_inv_scale.end(), 0.0) / n;
  const double my = std::accumulate(fit.log_count.begin(), fit.log_count.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < fit.log_count.size(); ++i) {
    sxy += (fit.log_inv_scale[i] - mx) * (fit.log_count[i] - my);
    sxx += (fit.log_inv_scale[i] - mx) * (fit.log_inv_scale[i] - mx);
  }
  fit.dimension = sxy / sxx;
  return fit;
}

}  // namespace nilcarpet
