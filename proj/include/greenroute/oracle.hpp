#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "greenroute/execution.hpp"
#include "greenroute/model.hpp"

namespace greenroute {

struct OracleBudget {
  std::size_t max_paths_per_demand = 64;
  std::uint64_t max_combinations = 1'000'000;
};

struct PathEnumeration {
  std::vector<Path> paths;
  bool truncated = false;
};

// All simple source -> sink paths in lexicographic order of node sequence
// (parallel links: then of edge ids), cut at the budget with `truncated` set.
PathEnumeration enumerate_paths(const Network& net, const Demand& demand, const OracleBudget& budget);

struct OracleResult {
  bool feasible = false;
  bool certified = false;  // false when some demand's path list was truncated
  double optimal_cost = 0.0;
  std::vector<std::size_t> choice;  // index into each demand's path list
  std::vector<Path> paths;
  std::vector<std::int64_t> loads;
  std::optional<IntegralSolution> solution;  // step objective only
  std::uint64_t combinations = 0;
};

// Exhaustive search over the cross product of per-demand paths minimising
// sum_e f(load_e) with minimal supporting rates. Routings overflowing R_m are
// skipped. Equal-cost optima resolve to the lexicographically smallest choice
// vector. Throws oracle_budget_exceeded when the product exceeds the budget.
OracleResult solve_exact(const Network& net, std::span<const Demand> demands, const StepCost& cost,
                         const OracleBudget& budget = {}, Execution exec = Execution::serial);

// Same search under the continuous objective sum_e g(load_e), with no rate
// cap. Its optimum bounds the fractional relaxation from above.
OracleResult solve_exact_power(const Network& net, std::span<const Demand> demands, const PowerFit& fit,
                               const OracleBudget& budget = {}, Execution exec = Execution::serial);

}  // namespace greenroute
