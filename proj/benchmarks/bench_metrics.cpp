#include <benchmark/benchmark.h>

#include "benchpress/graph.hpp"
#include "benchpress/metrics.hpp"
#include "benchpress/netgen.hpp"

using namespace benchpress;

namespace {

void BM_CompareCpdag(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const auto a = netgen::gen_rand_dag({p, 4.0, std::nullopt, "er", 1});
  const auto b = netgen::gen_rand_dag({p, 4.0, std::nullopt, "er", 2});
  for (auto _ : state) benchmark::DoNotOptimize(metrics::compare(cpdag(a), cpdag(b)).shd);
}
BENCHMARK(BM_CompareCpdag)->Arg(20)->Arg(80);

}  // namespace
