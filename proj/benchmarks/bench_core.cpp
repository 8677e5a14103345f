#include <benchmark/benchmark.h>

#include "jpvi/gap.hpp"
#include "jpvi/identities.hpp"
#include "jpvi/moments.hpp"
#include "jpvi/orthopoly.hpp"
#include "jpvi/quadrature.hpp"
#include "jpvi/specfun.hpp"

using namespace jpvi;

namespace {

WeightParams reference_weight() {
  return WeightParams{XReal::parse("1.5"), XReal::parse("0.5"), XReal(1), XReal(1)};
}

void BM_Hankel(benchmark::State& state) {
  PrecisionScope bits(static_cast<int>(state.range(1)));
  const int n = static_cast<int>(state.range(0));
  const WeightParams p = reference_weight();
  const XReal t = XReal::parse("0.4");
  for (auto _ : state) benchmark::DoNotOptimize(hankel(n, p, t));
}
BENCHMARK(BM_Hankel)->Args({3, 256})->Args({8, 256})->Args({8, 512})->Args({16, 512})->Unit(benchmark::kMicrosecond);

void BM_BuildSystem(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightParams p = reference_weight();
  const XReal t = XReal::parse("0.4");
  for (auto _ : state) benchmark::DoNotOptimize(build_system(n, p, t));
}
BENCHMARK(BM_BuildSystem)->Arg(4)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_LogBarnesG(benchmark::State& state) {
  PrecisionScope bits(static_cast<int>(state.range(0)));
  const XReal x = XReal::parse("7.3");
  for (auto _ : state) benchmark::DoNotOptimize(log_barnes_g(x));
}
BENCHMARK(BM_LogBarnesG)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_Hyp2F1(benchmark::State& state) {
  const XReal a = XReal::parse("2.5"), b = XReal(1), c = XReal::parse("3.5"), z = XReal::parse("-2.33");
  for (auto _ : state) benchmark::DoNotOptimize(hyp2f1(a, b, c, z));
}
BENCHMARK(BM_Hyp2F1)->Unit(benchmark::kMicrosecond);

void BM_TanhSinh(benchmark::State& state) {
  PrecisionScope bits(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate([](const QuadPoint& q) { return sqrt(q.from_left) * log1p(q.x); }, XReal(0), XReal(1)));
  }
}
BENCHMARK(BM_TanhSinh)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_IdentitySuite(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightParams p = reference_weight();
  const XReal t = XReal::parse("0.4");
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(n, p, t));
}
BENCHMARK(BM_IdentitySuite)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_GapGram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(log_gap_gram(n, XReal::parse("1.5"), XReal::parse("0.5"), XReal::parse("0.6")));
}
BENCHMARK(BM_GapGram)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
