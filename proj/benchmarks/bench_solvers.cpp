#include <benchmark/benchmark.h>

#include "moseg/qubo.hpp"
#include "moseg/samplers.hpp"
#include "moseg/spectral.hpp"
#include "moseg/synthetic.hpp"

namespace {

moseg::MotionProblem make_problem(int n, int points, double noise) {
  moseg::SyntheticConfig cfg;
  cfg.n = n;
  cfg.d = 2;
  cfg.points_per_image = points;
  cfg.noise = noise;
  cfg.seed = 11;
  return moseg::generate_instance(cfg);
}

void BM_BuildV1(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 16, 0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(moseg::build_v1(problem, 14.0));
}

void BM_BuildV2(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 16, 0.2);
  const auto counts = moseg::all_motion_counts(*problem.ground_truth, problem.d);
  for (auto _ : state)
    benchmark::DoNotOptimize(moseg::build_v2(problem, 27.5, 3.2, counts));
}

void BM_AnnealRead(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 16, 0.2);
  const auto qubo = moseg::build_v1(problem, 14.0);
  moseg::AnnealParams params;
  params.reads = 10;
  params.sweeps = 64;
  params.seed = 5;
  for (auto _ : state)
    benchmark::DoNotOptimize(moseg::simulated_annealing(qubo, params));
}

void BM_BruteForce(benchmark::State& state) {
  moseg::SyntheticConfig cfg;
  cfg.n = 2;
  cfg.d = 2;
  cfg.points_per_image = static_cast<int>(state.range(0));
  cfg.seed = 3;
  const auto problem = moseg::generate_instance(cfg);
  const auto qubo = moseg::build_v1(problem, 14.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(moseg::brute_force(qubo, 16));
}

void BM_Spectral(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 16, 0.2);
  moseg::SpectralParams params;
  params.seed = 7;
  for (auto _ : state)
    benchmark::DoNotOptimize(moseg::spectral_segment(problem, params));
}

}  // namespace

BENCHMARK(BM_BuildV1)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BuildV2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AnnealRead)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForce)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Spectral)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
