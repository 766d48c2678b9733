#include "greenroute/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <queue>
#include <tuple>

#include "greenroute/error.hpp"
#include "greenroute/fitting.hpp"

namespace greenroute {

namespace {

struct ActivePath {
  Path path;
  double weight;
};

double path_weight(const Path& p, std::span<const double> edge_weights) {
  double c = 0.0;
  for (EdgeId e : p.edges) c += edge_weights[e];
  return c;
}

double path_marginal(const Path& p, const std::vector<double>& loads, const PowerFit& g) {
  double c = 0.0;
  for (EdgeId e : p.edges) c += g.derivative(loads[e]);
  return c;
}

class ConditionalGradient {
 public:
  ConditionalGradient(const Network& net, std::span<const Demand> demands, const PowerFit& g,
                      const SolverConfig& cfg)
      : net_(net), demands_(demands), g_(g), cfg_(cfg),
        active_(demands.size()), loads_(net.edge_count(), 0.0),
        weights_(net.edge_count(), 0.0), marker_(net.edge_count(), 0) {}

  FractionalSolution run() {
    // At zero load every marginal cost is equal, so the first assignment is
    // the min-hop routing.
    auto initial = shortest_paths(net_, demands_, weights_, cfg_.execution);
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      active_[i].push_back({std::move(initial[i]), static_cast<double>(demands_[i].amount)});
    }

    FractionalSolution sol;
    double best_lower = -std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    for (;; ++iter) {
      recompute_loads();
      const double objective = total_cost();
      sol.objective_trace.push_back(objective);

      for (EdgeId e = 0; e < net_.edge_count(); ++e) weights_[e] = g_.derivative(loads_[e]);
      auto targets = shortest_paths(net_, demands_, weights_, cfg_.execution);

      double gap = 0.0;
      for (std::size_t i = 0; i < demands_.size(); ++i) {
        double current = 0.0;
        for (const auto& ap : active_[i]) current += ap.weight * path_weight(ap.path, weights_);
        gap += current - static_cast<double>(demands_[i].amount) * path_weight(targets[i], weights_);
      }
      best_lower = std::max(best_lower, objective - std::max(gap, 0.0));
      if (objective - best_lower <= cfg_.rel_gap_tol * objective) {
        sol.converged = true;
        break;
      }
      if (iter == cfg_.max_iterations) break;

      if (cfg_.step_rule == StepRule::line_search) {
        for (std::size_t i = 0; i < demands_.size(); ++i) pairwise_step(i, targets[i]);
      } else {
        const double step = 2.0 / (static_cast<double>(iter) + 2.0);
        for (std::size_t i = 0; i < demands_.size(); ++i) {
          for (auto& ap : active_[i]) ap.weight *= 1.0 - step;
          add_weight(i, targets[i], step * static_cast<double>(demands_[i].amount));
        }
      }
    }

    sol.iterations = iter;
    sol.flows.assign(demands_.size(), std::vector<double>(net_.edge_count(), 0.0));
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      for (const auto& ap : active_[i]) {
        for (std::size_t h = 0; h < ap.path.edges.size(); ++h) {
          const EdgeId e = ap.path.edges[h];
          sol.flows[i][e] += net_.link(e).u == ap.path.nodes[h] ? ap.weight : -ap.weight;
        }
      }
    }
    sol.loads.assign(net_.edge_count(), 0.0);
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      for (EdgeId e = 0; e < net_.edge_count(); ++e) sol.loads[e] += std::abs(sol.flows[i][e]);
    }
    sol.objective = 0.0;
    for (double x : sol.loads) sol.objective += g_.eval(x);
    sol.lower_bound = best_lower;
    sol.duality_gap = std::max(0.0, (sol.objective - best_lower) / sol.objective);
    return sol;
  }

 private:
  void recompute_loads() {
    std::fill(loads_.begin(), loads_.end(), 0.0);
    for (const auto& paths : active_) {
      for (const auto& ap : paths) {
        for (EdgeId e : ap.path.edges) loads_[e] += ap.weight;
      }
    }
  }

  double total_cost() const {
    double c = 0.0;
    for (double x : loads_) c += g_.eval(x);
    return c;
  }

  void add_weight(std::size_t i, const Path& p, double w) {
    for (auto& ap : active_[i]) {
      if (ap.path == p) {
        ap.weight += w;
        return;
      }
    }
    active_[i].push_back({p, w});
  }

  // Moves flow of demand i from its costliest active path to `target`,
  // choosing the amount by exact line search on the convex 1-D restriction.
  void pairwise_step(std::size_t i, const Path& target) {
    auto& paths = active_[i];
    std::size_t away = 0;
    double worst = -1.0;
    for (std::size_t k = 0; k < paths.size(); ++k) {
      const double c = path_marginal(paths[k].path, loads_, g_);
      if (c > worst) {
        worst = c;
        away = k;
      }
    }
    if (paths[away].path == target) return;

    for (EdgeId e : target.edges) marker_[e] += 1;
    for (EdgeId e : paths[away].path.edges) marker_[e] -= 1;
    std::vector<EdgeId> gain, lose;
    for (EdgeId e : target.edges) if (marker_[e] > 0) gain.push_back(e);
    for (EdgeId e : paths[away].path.edges) if (marker_[e] < 0) lose.push_back(e);
    for (EdgeId e : target.edges) marker_[e] = 0;
    for (EdgeId e : paths[away].path.edges) marker_[e] = 0;

    auto slope = [&](double t) {
      double s = 0.0;
      for (EdgeId e : gain) s += g_.derivative(loads_[e] + t);
      for (EdgeId e : lose) s -= g_.derivative(std::max(loads_[e] - t, 0.0));
      return s;
    };
    const double limit = paths[away].weight;
    double t;
    if (slope(0.0) >= 0.0) {
      return;
    } else if (slope(limit) <= 0.0) {
      t = limit;
    } else {
      double lo = 0.0, hi = limit;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * limit; ++k) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
    }

    for (EdgeId e : gain) loads_[e] += t;
    for (EdgeId e : lose) loads_[e] = std::max(loads_[e] - t, 0.0);
    if (t >= limit) {
      paths.erase(paths.begin() + static_cast<std::ptrdiff_t>(away));
    } else {
      paths[away].weight -= t;
    }
    add_weight(i, target, t);
  }

  const Network& net_;
  std::span<const Demand> demands_;
  const PowerFit& g_;
  const SolverConfig& cfg_;
  std::vector<std::vector<ActivePath>> active_;
  std::vector<double> loads_;
  std::vector<double> weights_;
  std::vector<int> marker_;
};

}  // namespace

void check_config(const SolverConfig& cfg) {
  if (cfg.max_iterations < 1) throw Error(Errc::invalid_argument, "max_iterations must be >= 1");
  if (!(cfg.rel_gap_tol > 0.0 && cfg.rel_gap_tol < 1.0)) {
    throw Error(Errc::invalid_argument, "rel_gap_tol must lie in (0, 1)");
  }
  if (!(cfg.epsilon_flow > 0.0 && cfg.epsilon_flow < 1e-2)) {
    throw Error(Errc::invalid_argument, "epsilon_flow must lie in (0, 0.01)");
  }
}

Path shortest_path(const Network& net, NodeIndex s, NodeIndex t, std::span<const double> edge_weights) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  struct Label {
    double cost = inf;
    std::size_t hops = none;
    EdgeId via = none;
    bool done = false;
  };
  std::vector<Label> label(net.node_count());
  using Entry = std::tuple<double, std::size_t, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  label[s].cost = 0.0;
  label[s].hops = 0;
  queue.emplace(0.0, 0, s);
  while (!queue.empty()) {
    auto [cost, hops, n] = queue.top();
    queue.pop();
    if (label[n].done) continue;
    label[n].done = true;
    if (n == t) break;
    for (const Incidence& inc : net.incident(n)) {
      Label& next = label[inc.neighbor];
      if (next.done) continue;
      const double c = cost + edge_weights[inc.edge];
      const std::size_t h = hops + 1;
      if (c < next.cost || (c == next.cost && h < next.hops)) {
        next.cost = c;
        next.hops = h;
        next.via = inc.edge;
        queue.emplace(c, h, inc.neighbor);
      }
    }
  }
  if (!label[t].done) {
    throw Error(Errc::infeasible_no_path,
                "infeasible: no path from " + net.name(s) + " to " + net.name(t));
  }
  Path p;
  for (NodeIndex n = t; n != s;) {
    const EdgeId e = label[n].via;
    p.nodes.push_back(n);
    p.edges.push_back(e);
    n = net.link(e).other(n);
  }
  p.nodes.push_back(s);
  std::reverse(p.nodes.begin(), p.nodes.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

std::vector<Path> shortest_paths(const Network& net, std::span<const Demand> demands,
                                 std::span<const double> edge_weights, Execution exec) {
  std::vector<Path> out(demands.size());
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < demands.size(); ++i) {
      out[i] = shortest_path(net, demands[i].source, demands[i].sink, edge_weights);
    }
    return out;
  }

  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(demands.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = shortest_path(net, demands[i].source, demands[i].sink, edge_weights);
    } catch (...) {
#pragma omp critical(greenroute_sp_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

FractionalSolution solve_fractional(const Network& net, std::span<const Demand> demands,
                                    const PowerFit& fit, const SolverConfig& cfg) {
  check_config(cfg);
  PowerFit g = fit;
  if (g.beta < 1.0) {
    if (!cfg.clamp_beta) {
      throw Error(Errc::non_convex_objective,
                  "non-convex objective: fitted beta " + std::to_string(fit.beta) + " < 1");
    }
    g.beta = 1.0;
  }
  if (!(g.mu > 0.0)) throw Error(Errc::invalid_argument, "mu must be positive");
  for (const Demand& d : demands) {
    if (d.source == d.sink || d.amount < 1) throw Error(Errc::invalid_instance, "degenerate demand");
    if (!net.connected(d.source, d.sink)) {
      throw Error(Errc::infeasible_no_path,
                  "infeasible: no path from " + net.name(d.source) + " to " + net.name(d.sink));
    }
  }
  if (demands.empty()) {
    FractionalSolution sol;
    sol.loads.assign(net.edge_count(), 0.0);
    sol.converged = true;
    return sol;
  }
  return ConditionalGradient(net, demands, g, cfg).run();
}

double fractional_lower_bound(const FractionalSolution& sol, const StepCost& cost, const PowerFit& fit) {
  const double divisor = std::max(fit.phi, measure_gap(cost, fit));
  return sol.objective / divisor;
}

}  // namespace greenroute
