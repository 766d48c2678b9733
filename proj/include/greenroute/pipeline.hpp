#pragma once

#include "greenroute/fitting.hpp"
#include "greenroute/model.hpp"
#include "greenroute/relaxation.hpp"
#include "greenroute/rounding.hpp"

namespace greenroute {

struct PipelineConfig {
  SolverConfig solver;
  RoundingConfig rounding;
};

struct PipelineResult {
  PowerFit fit;  // the g actually used (after clamping, if any)
  bool beta_clamped = false;
  GapBoundReport bounds;
  FractionalSolution fractional;
  RoundingResult rounding;
  double lower_bound = 0.0;      // fractional objective / phi
  double empirical_ratio = 0.0;  // best rounded cost / lower_bound
};

// Fits g, checks convexity (clamping beta to 1 if solver.clamp_beta), solves
// the relaxation and rounds it. Rounding uses solver.epsilon_flow as the
// decomposition threshold.
PipelineResult solve_pipeline(const Instance& inst, const PipelineConfig& cfg);

// The fit step alone, with the convexity check applied.
PowerFit convex_fit(const StepCost& cost, bool clamp, bool* clamped = nullptr);

}  // namespace greenroute
