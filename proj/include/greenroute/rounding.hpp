#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "greenroute/execution.hpp"
#include "greenroute/model.hpp"

namespace greenroute {

struct WeightedPath {
  Path path;
  double weight = 0.0;
};

struct PathDecomposition {
  std::size_t demand = 0;
  std::vector<WeightedPath> paths;
  double residual = 0.0;  // flow mass not covered by any extracted path
  std::size_t extractions = 0;

  double total_weight() const;
  // Cumulative selection probabilities w_p / sum(w); the last entry is 1.
  std::vector<double> cumulative() const;
};

// Bottleneck path extraction on one demand's signed edge flow. Paths are found
// depth-first from the source, preferring the arc with the most flow and then
// the lowest edge id. Arcs whose flow drops to epsilon or below leave the
// support. Throws malformed_flow if conservation is off by more than
// epsilon * amount, or if the extracted weight misses the demand amount by more
// than epsilon * |E|.
PathDecomposition decompose_flow(const Network& net, const Demand& demand,
                                 std::span<const double> signed_flow, double epsilon);

PathDecomposition decompose_flow(const Network& net, std::span<const Demand> demands,
                                 const FractionalSolution& sol, std::size_t demand_index, double epsilon);

// Picks one path per demand, independently, with probability proportional to
// its weight. Deterministic for a given seed.
std::vector<Path> sample_paths(std::span<const PathDecomposition> decomps, std::uint64_t seed);

// Loads from the chosen paths and the minimal supporting rate per used link.
// Throws rate_overflow when some load exceeds the largest rate.
IntegralSolution assign_rates(const Network& net, std::span<const Path> paths,
                              std::span<const Demand> demands, const StepCost& cost);

struct RoundingConfig {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  double epsilon = 1e-6;
  Execution execution = Execution::serial;
};

struct TrialRecord {
  bool overflow = false;
  double cost_f = 0.0;  // sum of f(s_e) over used links
  double cost_g = 0.0;  // sum of g(x_e) at the rounded loads
};

struct TrialStats {
  std::size_t trials = 0;
  std::size_t feasible = 0;
  std::size_t overflow = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean_cost_g = 0.0;
  double lambda_emp = 0.0;  // mean_cost_g / fractional objective
};

struct RoundingResult {
  IntegralSolution best;
  std::size_t best_trial = 0;
  TrialStats stats;
  std::vector<TrialRecord> records;
  std::vector<PathDecomposition> decompositions;
};

// Repeats sampling and rate assignment with per-trial seeds derived from
// cfg.seed, drops overflowing trials and keeps the cheapest (lowest trial index
// on ties). Throws no_feasible_rounding when every trial overflows.
RoundingResult round_solution(const Network& net, std::span<const Demand> demands,
                              const FractionalSolution& sol, const StepCost& cost,
                              const PowerFit& fit, const RoundingConfig& cfg = {});

}  // namespace greenroute
