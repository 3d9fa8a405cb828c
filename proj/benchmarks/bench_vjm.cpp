#include <benchmark/benchmark.h>

#include "vjm/equilibrium.hpp"
#include "vjm/stiffness.hpp"

using namespace vjm;

namespace {

ParallelogramModel fixture() {
  Matrix6 Kb = Matrix6::Zero();
  Kb.diagonal() << 2.20e4, 18.1, 78.6, 3.48e4, 2.66e6, 5.85e5;
  Kb(1, 5) = Kb(5, 1) = -2.84e3;
  Kb(2, 4) = Kb(4, 2) = 1.25e4;
  return ParallelogramModel::from_bar(310.0, 69.1, Kb);
}

Pose offset(const ParallelogramModel& m, const Vector6& d) { return Pose::from_vector(m.unloaded_pose().vector() + d); }

void BM_ChainJacobians(benchmark::State& state) {
  const auto m = fixture();
  const Vector2 q(0.1, -0.05);
  const Vector6 th = Vector6::Constant(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(chain_jacobians(m, Chain::First, q, th));
}
BENCHMARK(BM_ChainJacobians);

void BM_ChainHessians(benchmark::State& state) {
  const auto m = fixture();
  const Vector2 q(0.1, -0.05);
  const Vector6 th = Vector6::Constant(0.01);
  const Vector6 lambda = (Vector6() << -100, 2, 3, 50, -400, 80).finished();
  for (auto _ : state) benchmark::DoNotOptimize(chain_hessians(m, Chain::First, q, th, lambda));
}
BENCHMARK(BM_ChainHessians);

void BM_SolveParallelogram(benchmark::State& state) {
  const auto m = fixture();
  const Pose target = offset(m, (Vector6() << -0.05, 0.02, 0.5, 1e-4, 0, -1e-4).finished());
  for (auto _ : state) benchmark::DoNotOptimize(solve_parallelogram(m, target));
}
BENCHMARK(BM_SolveParallelogram);

void BM_ParallelogramStiffness(benchmark::State& state) {
  const auto m = fixture();
  const auto eq = solve_parallelogram(m, offset(m, -0.01 * Vector6::Unit(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parallelogram_stiffness(m, eq));
}
BENCHMARK(BM_ParallelogramStiffness);

void BM_Sweep(benchmark::State& state) {
  const auto m = fixture();
  const auto steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(force_deflection_sweep(m, -Vector6::Unit(0), 0.5, steps));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sweep)->RangeMultiplier(4)->Range(8, 512)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
