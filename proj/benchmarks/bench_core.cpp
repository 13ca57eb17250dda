#include <benchmark/benchmark.h>

#include <vector>

#include "nilcarpet/carnot.hpp"
#include "nilcarpet/carpet.hpp"
#include "nilcarpet/hyperbolic.hpp"
#include "nilcarpet/packing.hpp"
#include "nilcarpet/random.hpp"
#include "nilcarpet/stretch.hpp"

using namespace nilcarpet;

namespace {

CarnotShape shape_for(int64_t which) {
  static const CarnotShape shapes[] = {{Algebra::Real, 3}, {Algebra::Complex, 3}, {Algebra::Quaternion, 3}};
  return shapes[which];
}

std::vector<HalfSpacePoint> points(const CarnotShape& shape, double u, std::size_t count) {
  Rng rng(5);
  std::vector<HalfSpacePoint> out;
  std::vector<double> x(static_cast<std::size_t>(shape.dim()) + 1);
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& v : x) v = rng.uniform(-1, 1);
    x.back() = u;
    out.push_back(from_chart(shape, x));
  }
  return out;
}

void BM_KcDist(benchmark::State& state) {
  const auto p = points(shape_for(state.range(0)), 0.3, 256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kc_dist(p[i % 256], p[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_KcDist)->DenseRange(0, 2);

void BM_InvertUnit(benchmark::State& state) {
  const auto p = points(shape_for(state.range(0)), 0.2, 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(invert_unit(p[i++ % 256]));
}
BENCHMARK(BM_InvertUnit)->DenseRange(0, 2);

void BM_Contains(benchmark::State& state) {
  const auto spec = CarpetSpec::geometric(2, 3, static_cast<int>(state.range(0)));
  Rng rng(7);
  std::vector<double> x(2);
  for (auto _ : state) {
    x[0] = rng.uniform(-0.5, 0.5);
    x[1] = rng.uniform(-0.5, 0.5);
    benchmark::DoNotOptimize(contains(spec, x));
  }
}
BENCHMARK(BM_Contains)->DenseRange(1, 5);

void BM_Pack(benchmark::State& state) {
  const auto spec = CarpetSpec::geometric(2, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pack({Algebra::Real, 3}, spec, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Pack)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Psi(benchmark::State& state) {
  const auto map = StretchMap::from_carpet(CarpetSpec::geometric(2, 3, static_cast<int>(state.range(0))), 2.0);
  Rng rng(11);
  for (auto _ : state) benchmark::DoNotOptimize(map.psi(rng.uniform(-0.5, 0.5)));
}
BENCHMARK(BM_Psi)->DenseRange(1, 4);

}  // namespace
BENCHMARK_MAIN();
