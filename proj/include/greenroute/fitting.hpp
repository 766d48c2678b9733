#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "greenroute/model.hpp"

namespace greenroute {

// Step function in log-log coordinates: level i holds value v[i] = log y_i on
// the interval [w[i], w[i+1]], where w[0] = log 1 = 0 and w[i+1] = log R_i.
struct LogBreakpoints {
  std::vector<double> v;
  std::vector<double> w;
};

LogBreakpoints log_breakpoints(const StepCost& cost);

// Integrated squared log-error of the line log_mu + beta * w against the log
// step function over [0, log R_m], integrated in closed form.
double integrated_squared_error(const LogBreakpoints& lb, double log_mu, double beta);

// The 2x2 system obtained by setting both partial derivatives of the
// integrated squared error to zero:
//   a11 * log_mu + a12 * beta = b1
//   a12 * log_mu + a22 * beta = b2
struct NormalEquations {
  double a11, a12, a22, b1, b2;

  // Largest relative residual of the two rows at the given point.
  double residual(double log_mu, double beta) const;
};

NormalEquations normal_equations(const LogBreakpoints& lb);

// Least-squares power law g(x) = mu * x^beta for the step cost in log space.
// Also fills sigma, phi and gap. Throws degenerate_domain when R_m <= 1.
PowerFit fit_power_law(const StepCost& cost);

// Interpolation gap over [1, R_m]. The supremum is taken at step endpoints
// (both one-sided values of f at every breakpoint); samples_per_step >= 2 adds
// that many evenly spaced points per step as a numerical cross-check.
double measure_gap(const StepCost& cost, const PowerFit& fit, std::size_t samples_per_step = 0);

double max_adjacent_ratio(const StepCost& cost);

// True when g reaches the level y_i somewhere on the closure of every step.
bool intersects_each_step(const StepCost& cost, const PowerFit& fit);

struct GapBoundReport {
  bool applicable = false;  // m >= 2
  bool intersects_each_step = false;
  double gamma = 1.0;
  double lower = 1.0;  // 2 gamma / (gamma + 1)
  double upper = 1.0;  // max(gamma, f(1) / mu)
  double gap = 1.0;
  std::optional<bool> holds;  // set only when applicable and intersecting
};

GapBoundReport check_gap_bounds(const StepCost& cost, const PowerFit& fit);

// Replaces beta by 1 keeping mu, and recomputes gap and phi for the new g.
PowerFit clamp_beta(const StepCost& cost, const PowerFit& fit);

}  // namespace greenroute
