// Microbenchmarks for the hot paths: affectance accumulation, the exact and
// greedy schedulers, the subset scan behind lambda, and simulator throughput.
// Sizes are chosen so a full run stays under a minute.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "sinrsched/affectance.hpp"
#include "sinrsched/distsim.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/measures.hpp"

using namespace sinrsched;

namespace {

Instance random_instance(int n, std::uint64_t seed) {
  RandomEuclideanSpec spec;
  spec.n = n;
  spec.area_side = 8.0;
  spec.min_length = 0.5;
  spec.max_length = 1.5;
  spec.params.alpha = 2.5;
  spec.params.beta = 1.5;
  spec.seed = seed;
  return gen_random_euclidean(spec);
}

std::vector<int> all_ids(const Instance& inst) {
  std::vector<int> ids;
  for (const auto& l : inst.links()) ids.push_back(l.id);
  return ids;
}

void BM_AffectanceSums(benchmark::State& state) {
  const Instance inst = gen_gadget(static_cast<int>(state.range(0)), 2.0);
  const std::vector<int> ids = all_ids(inst);
  for (auto _ : state) {
    double total = 0.0;
    for (int v : ids) total += affectance_sums(inst, ids, v, true).in_sum;
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ids.size()));
}

void BM_FirstFitSchedule(benchmark::State& state) {
  const Instance inst = gen_gadget(static_cast<int>(state.range(0)), 2.0);
  for (auto _ : state) {
    Schedule s = schedule_first_fit(inst);
    benchmark::DoNotOptimize(s.slots.data());
  }
}

void BM_ExactSchedulingNumber(benchmark::State& state) {
  const Instance inst = random_instance(static_cast<int>(state.range(0)), 0xBE7C);
  for (auto _ : state) {
    SchedulingResult r = scheduling_number_exact(inst);
    benchmark::DoNotOptimize(r.t);
  }
}

void BM_LambdaExact(benchmark::State& state) {
  const Instance inst = random_instance(static_cast<int>(state.range(0)), 0xBE7D);
  for (auto _ : state) {
    ValueWitness w = lambda_exact(inst);
    benchmark::DoNotOptimize(w.value);
  }
}

void BM_SimulatorRun(benchmark::State& state) {
  const Instance inst = gen_gadget(static_cast<int>(state.range(0)), 2.0);
  SimConfig cfg;
  cfg.n_estimate = inst.link_count();
  std::uint64_t seed = 1;
  std::int64_t slots = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    SimTrace trace = run_distributed(inst, cfg);
    slots += static_cast<std::int64_t>(trace.slots.size());
    benchmark::DoNotOptimize(trace.completion_slot);
  }
  state.SetItemsProcessed(slots);  // slots simulated per second
}

}  // namespace

BENCHMARK(BM_AffectanceSums)->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_FirstFitSchedule)->RangeMultiplier(2)->Range(8, 128);
BENCHMARK(BM_ExactSchedulingNumber)->DenseRange(8, 14, 2);
BENCHMARK(BM_LambdaExact)->DenseRange(10, 18, 4);
BENCHMARK(BM_SimulatorRun)->RangeMultiplier(4)->Range(4, 64);

BENCHMARK_MAIN();
