#include "greenroute/pipeline.hpp"

#include "greenroute/error.hpp"

namespace greenroute {

PowerFit convex_fit(const StepCost& cost, bool clamp, bool* clamped) {
  PowerFit fit = fit_power_law(cost);
  if (clamped) *clamped = false;
  if (fit.beta >= 1.0) return fit;
  if (!clamp) {
    throw Error(Errc::non_convex_objective,
                "non-convex objective: fitted beta " + std::to_string(fit.beta) + " < 1 (use --clamp-beta)");
  }
  if (clamped) *clamped = true;
  return clamp_beta(cost, fit);
}

PipelineResult solve_pipeline(const Instance& inst, const PipelineConfig& cfg) {
  PipelineResult r;
  r.fit = convex_fit(inst.cost, cfg.solver.clamp_beta, &r.beta_clamped);
  r.bounds = check_gap_bounds(inst.cost, r.fit);
  r.fractional = solve_fractional(inst.network, inst.demands, r.fit, cfg.solver);

  RoundingConfig rc = cfg.rounding;
  rc.epsilon = cfg.solver.epsilon_flow;
  r.rounding = round_solution(inst.network, inst.demands, r.fractional, inst.cost, r.fit, rc);
  r.lower_bound = fractional_lower_bound(r.fractional, inst.cost, r.fit);
  r.empirical_ratio = r.lower_bound > 0.0 ? r.rounding.best.total_cost / r.lower_bound : 0.0;
  return r;
}

}  // namespace greenroute
