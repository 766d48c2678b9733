#include "greenroute/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>

#include "greenroute/error.hpp"

namespace greenroute {

double PathDecomposition::total_weight() const {
  double w = 0.0;
  for (const auto& p : paths) w += p.weight;
  return w;
}

std::vector<double> PathDecomposition::cumulative() const {
  std::vector<double> cdf;
  const double total = total_weight();
  double acc = 0.0;
  for (const auto& p : paths) {
    acc += p.weight;
    cdf.push_back(acc / total);
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

PathDecomposition decompose_flow(const Network& net, const Demand& demand,
                                 std::span<const double> signed_flow, double epsilon) {
  const std::size_t edges = net.edge_count();
  const double amount = static_cast<double>(demand.amount);

  // One arc per edge, oriented along the net flow.
  std::vector<double> flow(edges);
  std::vector<NodeIndex> tail(edges);
  std::vector<double> excess(net.node_count(), 0.0);
  for (EdgeId e = 0; e < edges; ++e) {
    const Link& l = net.link(e);
    flow[e] = std::abs(signed_flow[e]);
    tail[e] = signed_flow[e] >= 0.0 ? l.u : l.v;
    excess[tail[e]] += flow[e];
    excess[l.other(tail[e])] -= flow[e];
  }
  for (NodeIndex n = 0; n < net.node_count(); ++n) {
    const double expected = n == demand.source ? amount : (n == demand.sink ? -amount : 0.0);
    if (std::abs(excess[n] - expected) > epsilon * amount) {
      throw Error(Errc::malformed_flow, "malformed fractional flow: conservation violated at node " + net.name(n));
    }
  }

  PathDecomposition out;
  for (EdgeId e = 0; e < edges; ++e) {
    if (flow[e] > 0.0 && flow[e] <= epsilon) {
      out.residual += flow[e];
      flow[e] = 0.0;
    }
  }

  // Outgoing support arcs in visiting order; rebuilt lazily since flows change.
  auto outgoing = [&](NodeIndex n) {
    std::vector<EdgeId> arcs;
    for (const Incidence& inc : net.incident(n)) {
      if (tail[inc.edge] == n && flow[inc.edge] > epsilon) arcs.push_back(inc.edge);
    }
    std::sort(arcs.begin(), arcs.end(), [&](EdgeId a, EdgeId b) {
      return flow[a] != flow[b] ? flow[a] > flow[b] : a < b;
    });
    return arcs;
  };

  for (;;) {
    std::vector<char> visited(net.node_count(), 0);
    struct Frame {
      NodeIndex node;
      std::vector<EdgeId> arcs;
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    std::vector<EdgeId> taken;
    visited[demand.source] = 1;
    stack.push_back({demand.source, outgoing(demand.source)});
    bool found = false;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.node == demand.sink) {
        found = true;
        break;
      }
      if (top.next == top.arcs.size()) {
        stack.pop_back();
        if (!taken.empty()) taken.pop_back();
        continue;
      }
      const EdgeId e = top.arcs[top.next++];
      const NodeIndex head = net.link(e).other(top.node);
      if (visited[head]) continue;
      visited[head] = 1;
      taken.push_back(e);
      stack.push_back({head, outgoing(head)});
    }
    if (!found) break;

    WeightedPath wp;
    wp.weight = std::numeric_limits<double>::infinity();
    for (const Frame& f : stack) wp.path.nodes.push_back(f.node);
    wp.path.edges = taken;
    for (EdgeId e : taken) wp.weight = std::min(wp.weight, flow[e]);
    for (EdgeId e : taken) {
      flow[e] -= wp.weight;
      if (flow[e] <= epsilon) {
        out.residual += flow[e];
        flow[e] = 0.0;
      }
    }
    out.paths.push_back(std::move(wp));
    ++out.extractions;
  }
  for (double f : flow) out.residual += f;

  const double total = out.total_weight();
  if (std::abs(total - amount) > epsilon * static_cast<double>(edges)) {
    throw Error(Errc::malformed_flow,
                "malformed fractional flow: extracted weight " + std::to_string(total) +
                    " does not match demand amount " + std::to_string(demand.amount));
  }
  return out;
}

PathDecomposition decompose_flow(const Network& net, std::span<const Demand> demands,
                                 const FractionalSolution& sol, std::size_t demand_index, double epsilon) {
  PathDecomposition d = decompose_flow(net, demands[demand_index], sol.flows[demand_index], epsilon);
  d.demand = demand_index;
  return d;
}

std::vector<Path> sample_paths(std::span<const PathDecomposition> decomps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Path> chosen;
  chosen.reserve(decomps.size());
  for (const PathDecomposition& d : decomps) {
    if (d.paths.empty()) {
      throw Error(Errc::no_path_to_sample, "no path to sample for demand " + std::to_string(d.demand));
    }
    const std::vector<double> cdf = d.cumulative();
    // 53 random bits -> uniform in [0, 1).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto pick = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    chosen.push_back(d.paths[static_cast<std::size_t>(pick)].path);
  }
  return chosen;
}

IntegralSolution assign_rates(const Network& net, std::span<const Path> paths,
                              std::span<const Demand> demands, const StepCost& cost) {
  IntegralSolution sol;
  sol.paths.assign(paths.begin(), paths.end());
  sol.loads.assign(net.edge_count(), 0);
  sol.rate.assign(net.edge_count(), std::nullopt);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (EdgeId e : paths[i].edges) sol.loads[e] += demands[i].amount;
  }
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (sol.loads[e] == 0) continue;
    const auto load = static_cast<double>(sol.loads[e]);
    if (load > cost.max_rate()) {
      throw Error(Errc::rate_overflow, "rate overflow on edge " + std::to_string(e));
    }
    const std::size_t level = cost.level_for(load);
    sol.rate[e] = level;
    sol.total_cost += cost.cost(level);
  }
  return sol;
}

RoundingResult round_solution(const Network& net, std::span<const Demand> demands,
                              const FractionalSolution& sol, const StepCost& cost,
                              const PowerFit& fit, const RoundingConfig& cfg) {
  if (cfg.trials < 1) throw Error(Errc::invalid_argument, "trials must be >= 1");

  RoundingResult result;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    result.decompositions.push_back(decompose_flow(net, demands, sol, i, cfg.epsilon));
  }

  std::vector<IntegralSolution> solutions(cfg.trials);
  result.records.resize(cfg.trials);
  auto run_trial = [&](std::size_t t) {
    const auto paths = sample_paths(result.decompositions, mix_seed(cfg.seed, t));
    TrialRecord& rec = result.records[t];
    try {
      solutions[t] = assign_rates(net, paths, demands, cost);
    } catch (const Error& e) {
      if (e.code() != Errc::rate_overflow) throw;
      rec.overflow = true;
      return;
    }
    rec.cost_f = solutions[t].total_cost;
    for (std::int64_t x : solutions[t].loads) rec.cost_g += fit.eval(static_cast<double>(x));
  };

  if (cfg.execution == Execution::serial) {
    for (std::size_t t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(cfg.trials);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      try {
        run_trial(static_cast<std::size_t>(t));
      } catch (...) {
#pragma omp critical(greenroute_round_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  TrialStats& s = result.stats;
  s.trials = cfg.trials;
  bool have_best = false;
  double sum = 0.0, sum_g = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const TrialRecord& rec = result.records[t];
    if (rec.overflow) {
      ++s.overflow;
      continue;
    }
    ++s.feasible;
    sum += rec.cost_f;
    sum_g += rec.cost_g;
    if (!have_best || rec.cost_f < s.min) {
      s.min = rec.cost_f;
      result.best_trial = t;
      have_best = true;
    }
    s.max = std::max(s.max, rec.cost_f);
  }
  if (!have_best) throw Error(Errc::no_feasible_rounding, "no feasible rounding found");
  s.mean = sum / static_cast<double>(s.feasible);
  s.mean_cost_g = sum_g / static_cast<double>(s.feasible);
  s.lambda_emp = sol.objective > 0.0 ? s.mean_cost_g / sol.objective : 0.0;
  result.best = std::move(solutions[result.best_trial]);
  return result;
}

}  // namespace greenroute
