#pragma once

// Seeded random streams with results that depend only on (seed, stream
// index), never on thread count or scheduling.

#include <cstdint>
#include <functional>
#include <random>

namespace nilcarpet {

/// SplitMix64 finalizer; derives independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

  /// Uniform in [0, 1) with 53 random bits; bit-identical across platforms.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : engine_() % n; }
  /// Standard normal by Box–Muller.
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
};

/// Runs fn(chunk) for chunk in [0, n_chunks) on worker threads. Callers
/// write per-chunk results into preallocated slots and merge in order.
void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn);

}  // namespace nilcarpet
