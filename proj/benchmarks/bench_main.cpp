#include <benchmark/benchmark.h>

#include <random>

#include "tdisp/hom.hpp"
#include "tdisp/moduli.hpp"
#include "tdisp/witt.hpp"

using namespace tdisp;

namespace {

// Levels 1 and 2 fit the operation tables; 3 and 4 evaluate the Witt polynomials.
void BM_WittMul(benchmark::State& state) {
  auto W = WittRing::get(FiniteRing::parse("GF(2^4)"), static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  std::vector<WElem> xs(256);
  for (auto& x : xs) x = WElem{static_cast<std::uint32_t>(rng() % W->size())};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(W->mul(xs[i & 255], xs[(i + 1) & 255]));
    ++i;
  }
}
BENCHMARK(BM_WittMul)->DenseRange(1, 4);

void BM_Act(benchmark::State& state) {
  const ModuliInstance inst(FiniteRing::parse("GF(2)"), 2, 2, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inst.act(inst.G()[i % inst.G().size()], inst.X()[i % inst.X().size()]));
    ++i;
  }
}
BENCHMARK(BM_Act);

void BM_EnumerateOrbits(benchmark::State& state) {
  const ModuliInstance inst(FiniteRing::parse("GF(" + std::to_string(state.range(0)) + ")"), 2, 2, 1);
  EnumerationOptions opt;
  opt.invariants = false;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_orbits(inst, opt).classes.size());
}
BENCHMARK(BM_EnumerateOrbits)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_HomSolver(benchmark::State& state) {
  auto R = FiniteRing::parse("GF(2^2)");
  const int n = static_cast<int>(state.range(0));
  auto W = WittRing::get(R, n);
  WMatrix anti(2, 2);
  anti(0, 1) = anti(1, 0) = W->one();
  const Display D = Display::from_matrix(R, n, 1, anti);
  for (auto _ : state) benchmark::DoNotOptimize(hom_displays(D, D).log_order);
}
BENCHMARK(BM_HomSolver)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
