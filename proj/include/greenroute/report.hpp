#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenroute/execution.hpp"
#include "greenroute/fitting.hpp"
#include "greenroute/generator.hpp"
#include "greenroute/instance_io.hpp"
#include "greenroute/oracle.hpp"
#include "greenroute/pipeline.hpp"

namespace greenroute {

json fit_report(const StepCost& cost, const PowerFit& fit);
json fractional_report(const Network& net, const FractionalSolution& sol, double epsilon_flow);
json integral_report(const Network& net, const StepCost& cost, const IntegralSolution& sol);
json solve_report(const Instance& inst, const PipelineResult& result);
json oracle_report(const Network& net, const OracleResult& result);
json error_report(std::string_view code, std::string_view message);

struct BenchSpec {
  std::size_t count = 20;
  std::uint64_t seed = 7;
  RandomInstanceSpec instances;
  PipelineConfig pipeline;
  OracleBudget budget;
};

struct BenchRow {
  std::size_t index = 0;
  std::uint64_t instance_seed = 0;
  std::string status = "ok";
  bool certified = false;
  double oracle_cost = 0.0;
  double best_cost = 0.0;
  double mean_trial_cost = 0.0;
  double lower_bound = 0.0;
  double ratio_vs_oracle = 0.0;
  double ratio_vs_lower_bound = 0.0;
  double gap = 0.0;
  double sigma = 0.0;
  double phi = 0.0;
  double fit_ms = 0.0;
  double relax_ms = 0.0;
  double round_ms = 0.0;
  double oracle_ms = 0.0;
};

// Generates `count` instances from per-row seeds and runs the pipeline and
// the oracle on each. Rows come back in index order whatever the schedule.
std::vector<BenchRow> run_bench(const BenchSpec& spec, Execution exec);

inline constexpr std::string_view kBenchSchema = "# greenroute-bench v1";
inline constexpr std::size_t kBenchRuntimeColumns = 4;  // always the trailing columns

std::string bench_csv(std::span<const BenchRow> rows);

}  // namespace greenroute
