#include <benchmark/benchmark.h>

#include <random>

#include "ispec/correlation.hpp"
#include "ispec/linalg.hpp"
#include "ispec/model.hpp"
#include "ispec/spectral.hpp"

namespace {

const ispec::PeriodicIsingModel kHom(1, 1, {{1.0}}, {{1.0}});
constexpr double kBetaC = 0.44068679350977151;

void BM_Pfaffian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ispec::RealMatrix a = ispec::RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = u(rng);
      a(j, i) = -a(i, j);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(ispec::pfaffian(a).value);
  state.SetComplexityN(n);
}
BENCHMARK(BM_Pfaffian)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

void BM_CriticalBeta(benchmark::State& state) {
  const auto model = ispec::replicate(kHom, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ispec::critical_beta(model, 1e-12).beta_c);
}
BENCHMARK(BM_CriticalBeta)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ScanTorus(benchmark::State& state) {
  const auto op = ispec::assemble(kHom, 0.8 * kBetaC, ispec::WeightKind::HighTemp);
  for (auto _ : state) benchmark::DoNotOptimize(ispec::scan_torus(op, static_cast<int>(state.range(0)), 1).min_abs);
}
BENCHMARK(BM_ScanTorus)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BuildSymbol(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ispec::build_symbol(kHom, 0.8 * kBetaC, {grid, grid / 4, 1}).prefactor);
  }
}
BENCHMARK(BM_BuildSymbol)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SpinCorrSq(benchmark::State& state) {
  const auto sym = ispec::build_symbol(kHom, 1.2 * kBetaC);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ispec::spin_corr_sq(sym, n).corr_sq);
}
BENCHMARK(BM_SpinCorrSq)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
