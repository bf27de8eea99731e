#include <benchmark/benchmark.h>

#include "sci/solvers.hpp"
#include "sci/synthetic.hpp"
#include "sci/tv.hpp"

namespace {

using namespace sci;

void BM_Forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SensingOperator op(generate_masks(n, n, 8, 1));
  const VideoCube x = generate_synthetic_scene(n, n, 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(op.forward(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Forward)->Arg(64)->Arg(128)->Arg(256);

void BM_ProjectAffine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MaskCube masks = generate_masks(n, n, 8, 2);
  const SensingOperator op(masks);
  const VideoCube x = generate_synthetic_scene(n, n, 8, 2);
  const Measurement y = simulate_measurement(x, masks);
  const VideoCube start = op.adjoint(y);
  for (auto _ : state) benchmark::DoNotOptimize(op.project_affine(start, y));
}
BENCHMARK(BM_ProjectAffine)->Arg(64)->Arg(128);

// One denoise call per TV variant on a 128x128x8 cube at the default inner budget.
void BM_Denoise(benchmark::State& state) {
  const TvVariant v = TvVariant::all()[static_cast<std::size_t>(state.range(0))];
  const VideoCube z = generate_synthetic_scene(128, 128, 8, 3);
  DenoiseConfig c;
  c.lambda = 0.05;
  c.in_iter = v.solver() == InnerSolver::Fgp ? 2 : 5;
  for (auto _ : state) benchmark::DoNotOptimize(tv_denoise(z, v, c));
  state.SetLabel(std::string(v.label()));
}
BENCHMARK(BM_Denoise)->DenseRange(0, 6);

void BM_Solve(benchmark::State& state) {
  const auto f = kAllFrameworks[static_cast<std::size_t>(state.range(0))];
  const MaskCube masks = generate_masks(64, 64, 8, 4);
  const Measurement y = simulate_measurement(generate_synthetic_scene(64, 64, 8, 4), masks);
  SolveConfig c;
  c.framework = f;
  c.max_iter = 20;
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(y, masks, c));
  state.SetLabel(std::string(to_string(f)));
}
BENCHMARK(BM_Solve)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
