#include "greenroute/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "greenroute/error.hpp"

namespace greenroute {

namespace {

double ratio(double a, double b) { return std::max(a / b, b / a); }

// Relative slack used for comparisons that can be exact ties in real
// arithmetic (gap attained at x = 1 equals f(1)/mu, etc).
constexpr double kRelTol = 1e-12;

void check_cost(const StepCost& cost) {
  if (auto report = validate_step_cost(cost); !report.ok()) {
    throw Error(Errc::invalid_instance, report.summary());
  }
}

// Left end of step i on the x axis; the first step starts at 1.
double step_begin(const StepCost& cost, std::size_t i) { return i == 0 ? 1.0 : cost.rate(i - 1); }

PowerFit with_statistics(const StepCost& cost, double mu, double beta) {
  PowerFit fit;
  fit.mu = mu;
  fit.beta = beta;
  fit.sigma = max_adjacent_ratio(cost);
  fit.phi = std::max(fit.sigma, cost.cost(0) / mu);
  fit.gap = measure_gap(cost, fit);
  return fit;
}

}  // namespace

LogBreakpoints log_breakpoints(const StepCost& cost) {
  LogBreakpoints lb;
  lb.w.push_back(0.0);
  for (std::size_t i = 0; i < cost.size(); ++i) {
    lb.v.push_back(std::log(cost.cost(i)));
    lb.w.push_back(std::log(cost.rate(i)));
  }
  return lb;
}

double integrated_squared_error(const LogBreakpoints& lb, double log_mu, double beta) {
  double h = 0.0;
  for (std::size_t i = 0; i < lb.v.size(); ++i) {
    const double a = lb.w[i], b = lb.w[i + 1];
    const double c = lb.v[i] - log_mu;
    // integral of (c - beta w)^2 over [a, b]
    h += c * c * (b - a) - c * beta * (b * b - a * a) + beta * beta * (b * b * b - a * a * a) / 3.0;
  }
  return h;
}

NormalEquations normal_equations(const LogBreakpoints& lb) {
  const double W = lb.w.back();
  NormalEquations ne{W, W * W / 2.0, W * W * W / 3.0, 0.0, 0.0};
  for (std::size_t i = 0; i < lb.v.size(); ++i) {
    const double a = lb.w[i], b = lb.w[i + 1];
    ne.b1 += lb.v[i] * (b - a);
    ne.b2 += lb.v[i] * (b * b - a * a) / 2.0;
  }
  return ne;
}

double NormalEquations::residual(double log_mu, double beta) const {
  auto rel = [](double x, double y, double rhs) {
    return std::abs(x + y - rhs) / std::max({1.0, std::abs(x) + std::abs(y) + std::abs(rhs)});
  };
  return std::max(rel(a11 * log_mu, a12 * beta, b1), rel(a12 * log_mu, a22 * beta, b2));
}

PowerFit fit_power_law(const StepCost& cost) {
  check_cost(cost);
  if (!(cost.max_rate() > 1.0)) throw Error(Errc::degenerate_domain, "maximum rate must exceed 1");

  const LogBreakpoints lb = log_breakpoints(cost);
  const double W = lb.w.back();
  const double det = W * W * W * W / 12.0;
  if (!(det > 0.0) || !std::isfinite(det)) throw Error(Errc::internal, "singular fitting system");

  // Centred form of the normal equations: the slope is the covariance of w
  // and v(w) under the uniform measure on [0, W], divided by the variance.
  double mean = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < lb.v.size(); ++i) {
    const double a = lb.w[i], b = lb.w[i + 1];
    mean += lb.v[i] * (b - a);
    cov += lb.v[i] * ((b * b - a * a) / 2.0 - W / 2.0 * (b - a));
  }
  mean /= W;
  const double beta = cov / (W * W * W / 12.0);
  const double log_mu = mean - beta * W / 2.0;
  return with_statistics(cost, std::exp(log_mu), beta);
}

double max_adjacent_ratio(const StepCost& cost) {
  double gamma = 1.0;
  for (std::size_t i = 1; i < cost.size(); ++i) gamma = std::max(gamma, cost.cost(i) / cost.cost(i - 1));
  return gamma;
}

double measure_gap(const StepCost& cost, const PowerFit& fit, std::size_t samples_per_step) {
  double gap = ratio(cost.cost(0), fit.eval(1.0));
  for (std::size_t i = 0; i < cost.size(); ++i) {
    const double g_end = fit.eval(cost.rate(i));
    gap = std::max(gap, ratio(cost.cost(i), g_end));
    if (i + 1 < cost.size()) gap = std::max(gap, ratio(cost.cost(i + 1), g_end));
  }
  if (samples_per_step >= 2) {
    for (std::size_t i = 0; i < cost.size(); ++i) {
      const double lo = step_begin(cost, i), hi = cost.rate(i);
      for (std::size_t k = 0; k < samples_per_step; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples_per_step - 1);
        gap = std::max(gap, ratio(cost.cost(i), fit.eval(x)));
      }
    }
  }
  return gap;
}

bool intersects_each_step(const StepCost& cost, const PowerFit& fit) {
  for (std::size_t i = 0; i < cost.size(); ++i) {
    const double g0 = fit.eval(step_begin(cost, i)), g1 = fit.eval(cost.rate(i));
    const double lo = std::min(g0, g1), hi = std::max(g0, g1);
    const double y = cost.cost(i);
    if (y < lo * (1.0 - kRelTol) || y > hi * (1.0 + kRelTol)) return false;
  }
  return true;
}

GapBoundReport check_gap_bounds(const StepCost& cost, const PowerFit& fit) {
  GapBoundReport r;
  r.gap = measure_gap(cost, fit);
  r.applicable = cost.size() >= 2;
  r.intersects_each_step = intersects_each_step(cost, fit);
  r.gamma = max_adjacent_ratio(cost);
  r.lower = 2.0 * r.gamma / (r.gamma + 1.0);
  r.upper = std::max(r.gamma, cost.cost(0) / fit.mu);
  if (r.applicable && r.intersects_each_step) {
    r.holds = r.lower <= r.gap * (1.0 + kRelTol) && r.gap <= r.upper * (1.0 + kRelTol);
  }
  return r;
}

PowerFit clamp_beta(const StepCost& cost, const PowerFit& fit) {
  return with_statistics(cost, fit.mu, 1.0);
}

}  // namespace greenroute
