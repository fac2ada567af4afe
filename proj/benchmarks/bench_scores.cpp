#include <benchmark/benchmark.h>

#include <vector>

#include "benchpress/modelgen.hpp"
#include "benchpress/netgen.hpp"
#include "benchpress/scores.hpp"

using namespace benchpress;

namespace {

LabeledGraph truth(std::size_t p) { return netgen::gen_rand_dag({p, 2.0, std::nullopt, "er", 1}); }

void BM_BdeuLocal(benchmark::State& state) {
  const auto g = truth(20);
  const auto d = modelgen::sample_iid_discrete(modelgen::sample_bin_bn(g, 0.1, 0.9, 1), static_cast<std::size_t>(state.range(0)), 2);
  const std::vector<std::size_t> parents{1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(scores::bdeu_local(d, 0, parents, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BdeuLocal)->Arg(1000)->Arg(10000);

void BM_BgeLocal(benchmark::State& state) {
  const auto g = truth(static_cast<std::size_t>(state.range(0)));
  const auto d = modelgen::sample_iid_gaussian(modelgen::sample_sem_params(g, 0.25, 1.0, 1), 1000, true, 2);
  const scores::BGeScore score(d, {});
  const std::vector<std::size_t> parents{1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(score.compute(0, parents));
}
BENCHMARK(BM_BgeLocal)->Arg(10)->Arg(80);

}  // namespace
