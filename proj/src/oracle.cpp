#include "greenroute/oracle.hpp"

#include <algorithm>
#include <limits>
#include <omp.h>

#include "greenroute/error.hpp"
#include "greenroute/rounding.hpp"

namespace greenroute {

namespace {

constexpr double kInfeasible = std::numeric_limits<double>::infinity();

struct Best {
  double cost = kInfeasible;
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

  void offer(double c, std::uint64_t i) {
    if (c < cost || (c == cost && i < index)) {
      cost = c;
      index = i;
    }
  }
};

class CombinationScan {
 public:
  // cost_of_load[L] is the per-link cost at integer load L (infinite when
  // infeasible); loads never exceed the total demand.
  CombinationScan(const Network& net, std::span<const Demand> demands,
                  const std::vector<PathEnumeration>& lists, std::vector<double> cost_of_load)
      : net_(net), demands_(demands), lists_(lists), cost_of_load_(std::move(cost_of_load)) {
    total_ = 1;
    for (const auto& l : lists_) total_ *= l.paths.size();
  }

  std::uint64_t total() const { return total_; }

  Best scan(std::uint64_t begin, std::uint64_t end) const {
    Best best;
    if (begin >= end) return best;
    const std::size_t k = demands_.size();
    std::vector<std::size_t> choice = decode(begin);
    std::vector<std::int64_t> loads(net_.edge_count(), 0);
    for (std::size_t i = 0; i < k; ++i) apply(i, choice[i], demands_[i].amount, loads);

    for (std::uint64_t idx = begin;;) {
      double c = 0.0;
      for (std::int64_t x : loads) c += cost_of_load_[static_cast<std::size_t>(x)];
      best.offer(c, idx);
      if (++idx == end) break;
      for (std::size_t i = k; i-- > 0;) {
        apply(i, choice[i], -demands_[i].amount, loads);
        if (++choice[i] == lists_[i].paths.size()) {
          choice[i] = 0;
          apply(i, 0, demands_[i].amount, loads);
          continue;
        }
        apply(i, choice[i], demands_[i].amount, loads);
        break;
      }
    }
    return best;
  }

  std::vector<std::size_t> decode(std::uint64_t index) const {
    std::vector<std::size_t> choice(demands_.size());
    for (std::size_t i = demands_.size(); i-- > 0;) {
      const std::uint64_t radix = lists_[i].paths.size();
      choice[i] = static_cast<std::size_t>(index % radix);
      index /= radix;
    }
    return choice;
  }

 private:
  void apply(std::size_t demand, std::size_t path, std::int64_t delta, std::vector<std::int64_t>& loads) const {
    for (EdgeId e : lists_[demand].paths[path].edges) loads[e] += delta;
  }

  const Network& net_;
  std::span<const Demand> demands_;
  const std::vector<PathEnumeration>& lists_;
  std::vector<double> cost_of_load_;
  std::uint64_t total_ = 1;
};

Best run_scan(const CombinationScan& scan, Execution exec) {
  if (exec == Execution::serial) return scan.scan(0, scan.total());

  const std::uint64_t total = scan.total();
  const auto chunks = static_cast<std::int64_t>(
      std::min<std::uint64_t>(total, static_cast<std::uint64_t>(omp_get_max_threads()) * 16));
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(dynamic)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = total * static_cast<std::uint64_t>(c) / static_cast<std::uint64_t>(chunks);
      const std::uint64_t end = total * static_cast<std::uint64_t>(c + 1) / static_cast<std::uint64_t>(chunks);
      Best part = scan.scan(begin, end);
      local.offer(part.cost, part.index);
    }
#pragma omp critical(greenroute_oracle_reduce)
    best.offer(local.cost, local.index);
  }
  return best;
}

template <typename LinkCost>
OracleResult search(const Network& net, std::span<const Demand> demands, const OracleBudget& budget,
                    Execution exec, LinkCost link_cost) {
  if (budget.max_paths_per_demand < 1 || budget.max_combinations < 1) {
    throw Error(Errc::invalid_argument, "oracle budget must be positive");
  }
  OracleResult result;
  result.certified = true;
  std::vector<PathEnumeration> lists;
  std::uint64_t product = 1;
  for (const Demand& d : demands) {
    lists.push_back(enumerate_paths(net, d, budget));
    if (lists.back().truncated) result.certified = false;
    if (lists.back().paths.empty()) {
      throw Error(Errc::infeasible_no_path,
                  "infeasible: no path from " + net.name(d.source) + " to " + net.name(d.sink));
    }
    const std::uint64_t n = lists.back().paths.size();
    if (product > budget.max_combinations / n) {
      throw Error(Errc::oracle_budget_exceeded, "instance too large for oracle");
    }
    product *= n;
  }
  if (product > budget.max_combinations) throw Error(Errc::oracle_budget_exceeded, "instance too large for oracle");

  std::int64_t total_demand = 0;
  for (const Demand& d : demands) total_demand += d.amount;
  std::vector<double> cost_of_load(static_cast<std::size_t>(total_demand) + 1, 0.0);
  for (std::int64_t load = 1; load <= total_demand; ++load) cost_of_load[static_cast<std::size_t>(load)] = link_cost(load);

  CombinationScan scan(net, demands, lists, std::move(cost_of_load));
  result.combinations = scan.total();
  const Best best = run_scan(scan, exec);
  if (best.cost == kInfeasible) return result;

  result.feasible = true;
  result.optimal_cost = best.cost;
  result.choice = scan.decode(best.index);
  result.loads.assign(net.edge_count(), 0);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    result.paths.push_back(lists[i].paths[result.choice[i]]);
    for (EdgeId e : result.paths.back().edges) result.loads[e] += demands[i].amount;
  }
  return result;
}

}  // namespace

PathEnumeration enumerate_paths(const Network& net, const Demand& demand, const OracleBudget& budget) {
  PathEnumeration out;
  const std::size_t cap = budget.max_paths_per_demand;
  std::vector<char> on_path(net.node_count(), 0);
  Path current;
  current.nodes.push_back(demand.source);
  on_path[demand.source] = 1;

  // Depth-first in (neighbour, edge id) order yields lexicographic output.
  auto dfs = [&](auto&& self, NodeIndex node) -> bool {
    if (node == demand.sink) {
      if (out.paths.size() == cap) {
        out.truncated = true;
        return false;
      }
      out.paths.push_back(current);
      return true;
    }
    for (const Incidence& inc : net.incident(node)) {
      if (on_path[inc.neighbor]) continue;
      on_path[inc.neighbor] = 1;
      current.nodes.push_back(inc.neighbor);
      current.edges.push_back(inc.edge);
      const bool go_on = self(self, inc.neighbor);
      current.nodes.pop_back();
      current.edges.pop_back();
      on_path[inc.neighbor] = 0;
      if (!go_on) return false;
    }
    return true;
  };
  if (demand.source != demand.sink) dfs(dfs, demand.source);
  return out;
}

OracleResult solve_exact(const Network& net, std::span<const Demand> demands, const StepCost& cost,
                         const OracleBudget& budget, Execution exec) {
  OracleResult r = search(net, demands, budget, exec, [&](std::int64_t load) {
    const auto x = static_cast<double>(load);
    return x > cost.max_rate() ? kInfeasible : cost.eval(x);
  });
  if (r.feasible) r.solution = assign_rates(net, r.paths, demands, cost);
  return r;
}

OracleResult solve_exact_power(const Network& net, std::span<const Demand> demands, const PowerFit& fit,
                               const OracleBudget& budget, Execution exec) {
  return search(net, demands, budget, exec,
                [&](std::int64_t load) { return fit.eval(static_cast<double>(load)); });
}

}  // namespace greenroute
