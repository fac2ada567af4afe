#include <benchmark/benchmark.h>

#include "benchpress/citests.hpp"
#include "benchpress/learners.hpp"
#include "benchpress/modelgen.hpp"
#include "benchpress/netgen.hpp"

using namespace benchpress;

namespace {

DataMatrix gaussian(std::size_t p, std::size_t n) {
  const auto g = netgen::gen_rand_dag({p, 2.0, std::nullopt, "er", 3});
  return modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, 3), n, true, 4);
}

void BM_PcFisherZ(benchmark::State& state) {
  const auto d = gaussian(static_cast<std::size_t>(state.range(0)), 1000);
  const citests::FisherZ test(d);
  for (auto _ : state) benchmark::DoNotOptimize(learn::pc(test, d.labels, {0.01, std::nullopt}).ntests);
}
BENCHMARK(BM_PcFisherZ)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_HillClimbBge(benchmark::State& state) {
  const auto d = gaussian(static_cast<std::size_t>(state.range(0)), 500);
  for (auto _ : state) {
    const scores::BGeScore score(d, {});
    benchmark::DoNotOptimize(learn::hill_climb(score, d.labels).score);
  }
}
BENCHMARK(BM_HillClimbBge)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_StructureMcmc(benchmark::State& state) {
  const auto d = gaussian(10, 300);
  const scores::BGeScore score(d, {});
  for (auto _ : state)
    benchmark::DoNotOptimize(learn::structure_mcmc(score, d.labels, static_cast<std::size_t>(state.range(0)), 1).records.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StructureMcmc)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
