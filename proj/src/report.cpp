#include "greenroute/report.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "greenroute/error.hpp"

namespace greenroute {

namespace {

json path_json(const Network& net, const Path& p) {
  json nodes = json::array();
  for (NodeIndex n : p.nodes) nodes.push_back(net.name(n));
  return {{"nodes", nodes}, {"edges", p.edges}};
}

json paths_json(const Network& net, std::span<const Path> paths) {
  json out = json::object();
  for (std::size_t i = 0; i < paths.size(); ++i) out[std::to_string(i)] = path_json(net, paths[i]);
  return out;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

json fit_report(const StepCost& cost, const PowerFit& fit) {
  const GapBoundReport b = check_gap_bounds(cost, fit);
  json bounds = {{"applicable", b.applicable},
                 {"intersects_each_step", b.intersects_each_step},
                 {"gamma", b.gamma},
                 {"lower", b.lower},
                 {"upper", b.upper},
                 {"holds", b.holds ? json(*b.holds) : json(nullptr)}};
  return {{"mu", fit.mu}, {"beta", fit.beta}, {"gap", fit.gap}, {"sigma", fit.sigma}, {"phi", fit.phi},
          {"bounds", bounds}};
}

json fractional_report(const Network& net, const FractionalSolution& sol, double epsilon_flow) {
  json flows = json::object();
  for (std::size_t i = 0; i < sol.flows.size(); ++i) {
    json list = json::array();
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
      const double y = sol.flows[i][e];
      if (std::abs(y) < epsilon_flow) continue;
      const Link& l = net.link(e);
      list.push_back({{"edge", e},
                      {"from", net.name(y > 0 ? l.u : l.v)},
                      {"to", net.name(y > 0 ? l.v : l.u)},
                      {"flow", std::abs(y)}});
    }
    flows[std::to_string(i)] = list;
  }
  return {{"flows", flows},
          {"loads", sol.loads},
          {"objective", sol.objective},
          {"lower_bound", sol.lower_bound},
          {"duality_gap", sol.duality_gap},
          {"iterations", sol.iterations},
          {"converged", sol.converged}};
}

json integral_report(const Network& net, const StepCost& cost, const IntegralSolution& sol) {
  json rates = json::object();
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (!sol.rate[e]) {
      rates[std::to_string(e)] = "off";
    } else {
      rates[std::to_string(e)] = {{"speed", cost.rate(*sol.rate[e])},
                                  {"cost", cost.cost(*sol.rate[e])},
                                  {"load", sol.loads[e]}};
    }
  }
  return {{"paths", paths_json(net, sol.paths)}, {"rates", rates}, {"total_cost", sol.total_cost}};
}

json solve_report(const Instance& inst, const PipelineResult& r) {
  json out = integral_report(inst.network, inst.cost, r.rounding.best);
  const TrialStats& s = r.rounding.stats;
  out["fractional_objective"] = r.fractional.objective;
  out["duality_gap"] = r.fractional.duality_gap;
  out["lower_bound"] = r.lower_bound;
  out["empirical_ratio"] = r.empirical_ratio;
  out["trials"] = {{"count", s.trials},       {"feasible", s.feasible},       {"overflow", s.overflow},
                   {"mean", s.mean},          {"min", s.min},                 {"max", s.max},
                   {"mean_cost_g", s.mean_cost_g}, {"lambda_emp", s.lambda_emp}, {"best_trial", r.rounding.best_trial}};
  out["fit"] = fit_report(inst.cost, r.fit);
  out["beta_clamped"] = r.beta_clamped;
  return out;
}

json oracle_report(const Network& net, const OracleResult& r) {
  json out = {{"optimal_cost", r.feasible ? json(r.optimal_cost) : json(nullptr)},
              {"feasible", r.feasible},
              {"certified", r.certified},
              {"combinations", r.combinations}};
  out["argmin_paths"] = r.feasible ? paths_json(net, r.paths) : json::object();
  return out;
}

json error_report(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::vector<BenchRow> run_bench(const BenchSpec& spec, Execution exec) {
  std::vector<BenchRow> rows(spec.count);
  auto run_row = [&](std::size_t i) {
    BenchRow& row = rows[i];
    row.index = i;
    row.instance_seed = mix_seed(spec.seed, i);
    PipelineConfig cfg = spec.pipeline;
    cfg.solver.execution = Execution::serial;
    cfg.rounding.execution = Execution::serial;
    cfg.rounding.seed = mix_seed(row.instance_seed, 1);
    try {
      const Instance inst = gen_random(spec.instances, row.instance_seed);

      auto t0 = std::chrono::steady_clock::now();
      bool clamped = false;
      const PowerFit fit = convex_fit(inst.cost, cfg.solver.clamp_beta, &clamped);
      row.fit_ms = elapsed_ms(t0);
      row.gap = fit.gap;
      row.sigma = fit.sigma;
      row.phi = fit.phi;

      t0 = std::chrono::steady_clock::now();
      const FractionalSolution frac = solve_fractional(inst.network, inst.demands, fit, cfg.solver);
      row.relax_ms = elapsed_ms(t0);

      t0 = std::chrono::steady_clock::now();
      RoundingConfig rc = cfg.rounding;
      rc.epsilon = cfg.solver.epsilon_flow;
      const RoundingResult rounded = round_solution(inst.network, inst.demands, frac, inst.cost, fit, rc);
      row.round_ms = elapsed_ms(t0);
      row.best_cost = rounded.best.total_cost;
      row.mean_trial_cost = rounded.stats.mean;
      row.lower_bound = fractional_lower_bound(frac, inst.cost, fit);
      row.ratio_vs_lower_bound = row.best_cost / row.lower_bound;

      t0 = std::chrono::steady_clock::now();
      const OracleResult oracle = solve_exact(inst.network, inst.demands, inst.cost, spec.budget);
      row.oracle_ms = elapsed_ms(t0);
      row.certified = oracle.certified;
      if (oracle.feasible) {
        row.oracle_cost = oracle.optimal_cost;
        row.ratio_vs_oracle = row.best_cost / oracle.optimal_cost;
      } else {
        row.status = "oracle_infeasible";
      }
    } catch (const Error& e) {
      row.status = std::string(to_string(e.code()));
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(spec.count);
  if (exec == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) run_row(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) run_row(static_cast<std::size_t>(i));
  }
  return rows;
}

std::string bench_csv(std::span<const BenchRow> rows) {
  std::ostringstream os;
  os << kBenchSchema << '\n'
     << "index,instance_seed,status,certified,oracle_cost,best_cost,mean_trial_cost,lower_bound,"
        "ratio_vs_oracle,ratio_vs_lower_bound,gap,sigma,phi,fit_ms,relax_ms,round_ms,oracle_ms\n";
  for (const BenchRow& r : rows) {
    os << r.index << ',' << r.instance_seed << ',' << r.status << ',' << (r.certified ? 1 : 0) << ','
       << number(r.oracle_cost) << ',' << number(r.best_cost) << ',' << number(r.mean_trial_cost) << ','
       << number(r.lower_bound) << ',' << number(r.ratio_vs_oracle) << ',' << number(r.ratio_vs_lower_bound)
       << ',' << number(r.gap) << ',' << number(r.sigma) << ',' << number(r.phi) << ',' << number(r.fit_ms)
       << ',' << number(r.relax_ms) << ',' << number(r.round_ms) << ',' << number(r.oracle_ms) << '\n';
  }
  return os.str();
}

}  // namespace greenroute
