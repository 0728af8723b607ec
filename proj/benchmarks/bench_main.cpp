#include <benchmark/benchmark.h>

#include "hsr/fit.hpp"
#include "hsr/landscape.hpp"
#include "hsr/losses.hpp"
#include "hsr/parallel.hpp"
#include "hsr/projection.hpp"
#include "hsr/relighting.hpp"
#include "hsr/synthetic.hpp"

namespace {

using namespace hsr;

void BM_Objective(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  const FieldPair pair = make_random_pair(2 * h, h, 1);
  LossConfig cfg;
  cfg.kind = static_cast<LossKind>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(objective(pair.pred, pair.gt, cfg).objective);
  state.SetItemsProcessed(state.iterations() * 2 * h * h);
}
BENCHMARK(BM_Objective)->ArgsProduct({{64, 256}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_ObjectiveThreads(benchmark::State& state) {
  set_thread_count(static_cast<unsigned>(state.range(0)));
  const FieldPair pair = make_random_pair(512, 256, 1);
  const LossConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(objective(pair.pred, pair.gt, cfg).objective);
  set_thread_count(0);
}
BENCHMARK(BM_ObjectiveThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_CubemapRoundTrip(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  const NormalField f = make_smooth_field(2 * h, h);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cubemap_to_equirect(equirect_to_cubemap(f, h), 2 * h, h).valid_count());
  }
}
BENCHMARK(BM_CubemapRoundTrip)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ShProjection(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  const FloatImage env(2 * h, h, 3, 1.0f);
  for (auto _ : state) benchmark::DoNotOptimize(project_env_to_sh(env).rgb[0][0]);
}
BENCHMARK(BM_ShProjection)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Relight(benchmark::State& state) {
  const NormalField n = make_smooth_field(512, 256);
  const FloatImage albedo(512, 256, 3, 0.5f);
  const ShCoefficients sh = project_env_to_sh(FloatImage(512, 256, 3, 1.0f));
  for (auto _ : state) benchmark::DoNotOptimize(relight(albedo, n, sh).data().data());
}
BENCHMARK(BM_Relight)->Unit(benchmark::kMillisecond);

void BM_Landscape(benchmark::State& state) {
  const UnitVector3 ref(0, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(generate_landscape(LossKind::kQuaternion, ref)[0]);
}
BENCHMARK(BM_Landscape)->Unit(benchmark::kMillisecond);

void BM_FitIterations(benchmark::State& state) {
  const NormalField gt = make_room_field(64, 32);
  FitConfig cfg;
  cfg.iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_normals(gt, cfg).trace.objective.back());
}
BENCHMARK(BM_FitIterations)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
