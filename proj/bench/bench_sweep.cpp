// Serial reference vs OpenMP sweep on the desk-scale horizon grid.
#include <benchmark/benchmark.h>

#include "ehsim/montecarlo.hpp"

namespace {

ehsim::SweepPlan horizon_plan(std::size_t reps) {
  ehsim::SweepPlan plan;
  plan.distribution = ehsim::DistributionSpec::exponential(10.0);
  plan.parameter = ehsim::SweepParameter::horizon;
  plan.values = {50, 100, 200, 500, 1000, 2000, 5000};
  plan.replications = reps;
  return plan;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto plan = horizon_plan(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ehsim::run_sweep_serial(plan));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 7);
}

void BM_SweepParallel(benchmark::State& state) {
  const auto plan = horizon_plan(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ehsim::run_sweep(plan, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 7);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)
    ->ArgsProduct({{20, 200}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
