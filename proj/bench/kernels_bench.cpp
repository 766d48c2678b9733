// Serial reference loops against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "greenroute/generator.hpp"
#include "greenroute/oracle.hpp"
#include "greenroute/pipeline.hpp"
#include "greenroute/relaxation.hpp"
#include "greenroute/rounding.hpp"

namespace gr = greenroute;

namespace {

gr::Execution mode(const benchmark::State& state) {
  return state.range(0) ? gr::Execution::parallel : gr::Execution::serial;
}

gr::Instance instance(std::size_t nodes, std::size_t demands, std::uint64_t seed) {
  gr::RandomInstanceSpec spec;
  spec.nodes = nodes;
  spec.demands = demands;
  spec.edge_prob = 0.5;
  return gr::gen_random(spec, seed);
}

void BM_OracleScan(benchmark::State& state) {
  const gr::Instance inst = instance(8, 4, 11);
  gr::OracleBudget budget;
  budget.max_combinations = 50'000'000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gr::solve_exact(inst.network, inst.demands, inst.cost, budget, mode(state)));
  }
}

void BM_ShortestPaths(benchmark::State& state) {
  gr::RandomInstanceSpec spec;
  spec.nodes = 200;
  spec.edge_prob = 0.05;
  spec.demands = 400;
  const gr::Instance inst = gr::gen_random(spec, 3);
  std::vector<double> w(inst.network.edge_count());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = 1.0 + static_cast<double>(e % 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gr::shortest_paths(inst.network, inst.demands, w, mode(state)));
  }
}

void BM_RoundingTrials(benchmark::State& state) {
  const gr::Instance inst = instance(12, 6, 5);
  const gr::PowerFit g = gr::convex_fit(inst.cost, true);
  const gr::FractionalSolution sol = gr::solve_fractional(inst.network, inst.demands, g);
  gr::RoundingConfig cfg;
  cfg.trials = 2000;
  cfg.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gr::round_solution(inst.network, inst.demands, sol, inst.cost, g, cfg));
  }
}

}  // namespace

BENCHMARK(BM_OracleScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShortestPaths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoundingTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
