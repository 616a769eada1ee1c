#include <benchmark/benchmark.h>

#include "hcomp/coarse.hpp"
#include "hcomp/compression.hpp"
#include "hcomp/embeddings.hpp"
#include "hcomp/kernels.hpp"

using namespace hcomp;

static void BM_FreeGroupBall(benchmark::State& state) {
  Space f(GroupSpec::free_group(2));
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(f.ball(radius));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.predicted_ball_size(radius)));
}
BENCHMARK(BM_FreeGroupBall)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_HeisenbergTable(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(HeisenbergLengthTable(radius));
}
BENCHMARK(BM_HeisenbergTable)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_ClosedFormProfile(benchmark::State& state) {
  Space f(GroupSpec::free_group(2));
  ProfileParams p;
  p.r_max = static_cast<int>(state.range(0));
  p.strategy = Strategy::closed_form();
  const auto spec = EmbeddingSpec::tree(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(compression_profile(f, spec, p));
}
BENCHMARK(BM_ClosedFormProfile)->Arg(16)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_ExactPairwiseProfile(benchmark::State& state) {
  Space z(GroupSpec::lattice(2));
  ProfileParams p;
  p.r_max = static_cast<int>(state.range(0));
  p.strategy = Strategy::exact();
  const auto spec = EmbeddingSpec::isometric();
  for (auto _ : state) benchmark::DoNotOptimize(compression_profile(z, spec, p));
}
BENCHMARK(BM_ExactPairwiseProfile)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_KernelAssembly(benchmark::State& state) {
  Space f(GroupSpec::free_group(2));
  Ball b = f.ball(static_cast<int>(state.range(0)));
  const auto spec = EmbeddingSpec::tree(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(schoenberg_kernel(f, spec, 4.0, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(b.points.size() * b.points.size()));
}
BENCHMARK(BM_KernelAssembly)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_PsdCheck(benchmark::State& state) {
  Space f(GroupSpec::free_group(2));
  auto u = schoenberg_kernel(f, EmbeddingSpec::tree(), 4.0, f.ball(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(psd_check(u));
}
BENCHMARK(BM_PsdCheck)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_QuasiGeodesic(benchmark::State& state) {
  auto cloud = fixtures::line(static_cast<int>(state.range(0)));
  QGParams p;
  for (auto _ : state) benchmark::DoNotOptimize(check_quasi_geodesic(cloud, p));
}
BENCHMARK(BM_QuasiGeodesic)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
