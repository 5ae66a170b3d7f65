#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vnav/mariner.hpp"
#include "vnav/vessel.hpp"
#include "vnav/worker_pool.hpp"

namespace {

vnav::PointCloud cloud(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> range(0.5, 20.0), az(-std::numbers::pi, std::numbers::pi),
      el(-std::numbers::pi / 12, std::numbers::pi / 12);
  vnav::PointCloud c;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = range(rng), a = az(rng), e = el(rng);
    c.points.push_back({r * std::cos(e) * std::cos(a), r * std::cos(e) * std::sin(a), r * std::sin(e)});
  }
  return c;
}

void BM_EvaluateCbf(benchmark::State& state) {
  const auto c = cloud(static_cast<std::size_t>(state.range(0)));
  const vnav::HyperEllipsoid e(0.8, 0.4, 0.4, 1);
  vnav::VesselParams p;
  p.z_crop.reset();
  vnav::WorkerPool pool;
  for (auto _ : state) benchmark::DoNotOptimize(vnav::evaluate_cbf(e, vnav::PlanarPose{}, c, p, &pool));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateCbf)->Arg(5760)->Arg(57600)->Unit(benchmark::kMillisecond);

void BM_Mariner(benchmark::State& state) {
  const auto c = cloud(static_cast<std::size_t>(state.range(0)));
  vnav::NeedleConfig cfg;
  vnav::WorkerPool pool;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vnav::select_preview_target(cfg, c, {6.0, 1.0, 0.0}, &pool));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_Mariner)->Arg(5760)->Arg(57600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
