#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "greenroute/execution.hpp"
#include "greenroute/model.hpp"

namespace greenroute {

enum class StepRule {
  diminishing,  // classic conditional gradient, step 2 / (k + 2)
  line_search,  // per-demand pairwise step with exact line search
};

struct SolverConfig {
  std::size_t max_iterations = 5000;
  double rel_gap_tol = 1e-4;
  StepRule step_rule = StepRule::line_search;
  double epsilon_flow = 1e-6;  // flows below this are zero downstream
  bool clamp_beta = false;     // solve with beta := 1 instead of rejecting beta < 1
  Execution execution = Execution::serial;
};

void check_config(const SolverConfig& cfg);

// Minimum-weight path from s to t; ties on weight go to fewer hops, then to the
// first path found scanning neighbours by (node index, edge id).
// Throws infeasible_no_path when t is unreachable.
Path shortest_path(const Network& net, NodeIndex s, NodeIndex t, std::span<const double> edge_weights);

// One shortest path per demand under a shared weight vector. This is the
// linear-minimisation step of the solver; demands are independent.
std::vector<Path> shortest_paths(const Network& net, std::span<const Demand> demands,
                                 std::span<const double> edge_weights, Execution exec);

// Minimises sum_e g(x_e) over fractional routings: each demand's flow may split
// across paths. The box 0 <= y <= d holds by construction.
FractionalSolution solve_fractional(const Network& net, std::span<const Demand> demands,
                                    const PowerFit& fit, const SolverConfig& cfg = {});

// objective / phi, a lower bound on the optimal integral cost under f. When the
// fit's gap exceeds phi the gap is used instead so the bound stays valid.
double fractional_lower_bound(const FractionalSolution& sol, const StepCost& cost, const PowerFit& fit);

}  // namespace greenroute
