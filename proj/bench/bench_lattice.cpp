// Serial reference vs OpenMP lattice kernels on the 2.28 body.

#include <benchmark/benchmark.h>

#include "wkstab/geometry.hpp"
#include "wkstab/scenario.hpp"

namespace {

const wkstab::OkounkovBody& body() {
  static const wkstab::OkounkovBody b(wkstab::builtin_scenario("2.28-B").vertices, "2.28");
  return b;
}

constexpr wkstab::LinearForm3 kG{0, 1, 2, 0};
constexpr wkstab::real kXi = 0.9377815610300645L;

void BM_SerialSums(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wkstab::serial::lattice_weighted_sums(body(), kG, kXi, m));
}

void BM_ParallelSums(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wkstab::lattice_weighted_sums(body(), kG, kXi, m));
}

void BM_SerialCount(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wkstab::serial::lattice_count(body(), m));
}

void BM_ParallelCount(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wkstab::lattice_count(body(), m));
}

}  // namespace

BENCHMARK(BM_SerialSums)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelSums)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SerialCount)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelCount)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
