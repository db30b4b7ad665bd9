#include <benchmark/benchmark.h>

#include "fcs/fock.hpp"
#include "fcs/quasifree.hpp"

namespace {

fcs::DriveProtocol default_protocol() { return {}; }

void BM_OneParticlePropagation(benchmark::State& state) {
  const auto p = default_protocol();
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto prop = fcs::propagate_one_particle(p, 10.0, L, 4096);
    benchmark::DoNotOptimize(prop.u);
  }
}
BENCHMARK(BM_OneParticlePropagation)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DeterminantCgf(benchmark::State& state) {
  const auto p = default_protocol();
  const int L = static_cast<int>(state.range(0));
  const auto prop = fcs::propagate_one_particle(p, 10.0, L, 4096);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(p.beta * i / 20.0);
  for (auto _ : state) {
    auto curve = fcs::heat_cgf_determinant(prop, p, grid);
    benchmark::DoNotOptimize(curve.values);
  }
}
BENCHMARK(BM_DeterminantCgf)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_FockPropagation(benchmark::State& state) {
  const auto p = default_protocol();
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto prop = fcs::propagate_fock(p, 5.0, L, 4096);
    benchmark::DoNotOptimize(prop.u);
  }
}
BENCHMARK(BM_FockPropagation)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
