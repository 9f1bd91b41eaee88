// Serial vs OpenMP kernels on the desk-scale synthetic instance.

#include <benchmark/benchmark.h>

#include "odmts/adoption.hpp"
#include "odmts/dfd.hpp"
#include "odmts/parallel.hpp"
#include "odmts/synthetic.hpp"

using namespace odmts;

namespace {

const Instance& desk() {
  static const Instance inst = generate_synthetic(GeneratorConfig{}, 7);
  return inst;
}

// a balanced design with a couple of open cycles
const Design& design() {
  static const Design z = [] {
    const Instance& inst = desk();
    return solve_dfd(inst, inst.core_trips(), Design(inst.arc_count())).design;
  }();
  return z;
}

void set_threads(const benchmark::State& state) { set_thread_count(static_cast<int>(state.range(0))); }

void BM_RouteBatchSerial(benchmark::State& state) {
  const TripSet all = desk().all_trips();
  for (auto _ : state) benchmark::DoNotOptimize(route_batch_serial(desk(), all, design()));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(all.size()));
}

void BM_RouteBatch(benchmark::State& state) {
  set_threads(state);
  const TripSet all = desk().all_trips();
  for (auto _ : state) benchmark::DoNotOptimize(route_batch(desk(), all, design()));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(all.size()));
}

void BM_MakeCutsSerial(benchmark::State& state) {
  const TripSet all = desk().all_trips();
  for (auto _ : state) benchmark::DoNotOptimize(make_cuts_serial(desk(), all, design()));
}

void BM_MakeCuts(benchmark::State& state) {
  set_threads(state);
  const TripSet all = desk().all_trips();
  for (auto _ : state) benchmark::DoNotOptimize(make_cuts(desk(), all, design()));
}

void BM_EvalSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(eval_design_serial(desk(), design(), {}));
}

void BM_Eval(benchmark::State& state) {
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(eval_design(desk(), design(), {}));
}

void BM_SolveDfdCore(benchmark::State& state) {
  set_threads(state);
  const TripSet core = desk().core_trips();
  for (auto _ : state) benchmark::DoNotOptimize(solve_dfd(desk(), core, Design(desk().arc_count())));
}

}  // namespace

BENCHMARK(BM_RouteBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RouteBatch)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MakeCutsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MakeCuts)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvalSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Eval)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SolveDfdCore)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
