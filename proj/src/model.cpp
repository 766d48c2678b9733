#include "greenroute/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "greenroute/error.hpp"

namespace greenroute {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_instance: return "invalid_instance";
    case Errc::domain_error: return "domain_error";
    case Errc::exceeds_max_rate: return "exceeds_max_rate";
    case Errc::degenerate_domain: return "degenerate_domain";
    case Errc::infeasible_no_path: return "infeasible_no_path";
    case Errc::non_convex_objective: return "non_convex_objective";
    case Errc::malformed_flow: return "malformed_flow";
    case Errc::no_path_to_sample: return "no_path_to_sample";
    case Errc::rate_overflow: return "rate_overflow";
    case Errc::no_feasible_rounding: return "no_feasible_rounding";
    case Errc::oracle_budget_exceeded: return "oracle_budget_exceeded";
    case Errc::generation_failed: return "generation_failed";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

Network::Network(std::vector<std::string> node_names, std::vector<Link> links)
    : names_(std::move(node_names)), links_(std::move(links)), adjacency_(names_.size()) {
  for (NodeIndex i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
  for (std::size_t pos = 0; pos < links_.size(); ++pos) {
    const Link& l = links_[pos];
    if (l.u == l.v || l.u >= names_.size() || l.v >= names_.size()) continue;
    adjacency_[l.u].push_back({l.id, l.v});
    adjacency_[l.v].push_back({l.id, l.u});
  }
  for (auto& inc : adjacency_) {
    std::sort(inc.begin(), inc.end(), [](const Incidence& a, const Incidence& b) {
      return a.neighbor != b.neighbor ? a.neighbor < b.neighbor : a.edge < b.edge;
    });
  }
}

std::optional<NodeIndex> Network::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Network::hop_distances(NodeIndex from) const {
  constexpr auto unreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(node_count(), unreached);
  if (from >= node_count()) return dist;
  std::deque<NodeIndex> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    NodeIndex n = queue.front();
    queue.pop_front();
    for (const Incidence& inc : adjacency_[n]) {
      if (dist[inc.neighbor] != unreached) continue;
      dist[inc.neighbor] = dist[n] + 1;
      queue.push_back(inc.neighbor);
    }
  }
  return dist;
}

bool Network::connected(NodeIndex a, NodeIndex b) const {
  if (a >= node_count() || b >= node_count()) return false;
  return hop_distances(a)[b] != std::numeric_limits<std::size_t>::max();
}

std::size_t StepCost::level_for(double x) const {
  if (!(x > 0.0)) throw Error(Errc::domain_error, "step cost evaluated at non-positive load");
  if (rates_.empty() || x > rates_.back()) {
    std::ostringstream os;
    os << "load " << x << " exceeds maximum rate";
    throw Error(Errc::exceeds_max_rate, os.str());
  }
  auto it = std::lower_bound(rates_.begin(), rates_.end(), x);
  return static_cast<std::size_t>(it - rates_.begin());
}

double step_cost_eval(const StepCost& cost, double x) { return cost.eval(x); }

double PowerFit::log_mu() const { return std::log(mu); }

double PowerFit::eval(double x) const {
  if (x <= 0.0) return 0.0;
  return mu * std::pow(x, beta);
}

double PowerFit::derivative(double x) const {
  if (x <= 0.0) return beta == 1.0 ? mu : (beta > 1.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return mu * beta * std::pow(x, beta - 1.0);
}

bool is_simple_path(const Network& net, const Path& path, NodeIndex from, NodeIndex to) {
  if (path.nodes.empty() || path.nodes.size() != path.edges.size() + 1) return false;
  if (path.nodes.front() != from || path.nodes.back() != to) return false;
  std::unordered_set<NodeIndex> seen;
  for (NodeIndex n : path.nodes) {
    if (n >= net.node_count() || !seen.insert(n).second) return false;
  }
  for (std::size_t h = 0; h < path.edges.size(); ++h) {
    if (path.edges[h] >= net.edge_count()) return false;
    const Link& l = net.link(path.edges[h]);
    NodeIndex a = path.nodes[h], b = path.nodes[h + 1];
    if (!((l.u == a && l.v == b) || (l.u == b && l.v == a))) return false;
  }
  return true;
}

double FractionalSolution::flow(std::size_t demand, EdgeId edge) const {
  return std::abs(flows[demand][edge]);
}

bool ValidationReport::has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].kind;
    if (!violations[i].detail.empty()) os << " (" << violations[i].detail << ")";
  }
  return os.str();
}

ValidationReport validate_step_cost(const StepCost& cost) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string detail = {}) {
    report.violations.push_back({std::move(kind), std::move(detail)});
  };
  auto rates = cost.rates();
  auto costs = cost.costs();
  if (rates.empty()) {
    add("empty rate table");
    return report;
  }
  if (rates.size() != costs.size()) {
    add("rate table length mismatch");
    return report;
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!std::isfinite(rates[i]) || !std::isfinite(costs[i])) add("non-finite rate table entry");
    if (costs[i] <= 0.0) add("non-positive cost", "level " + std::to_string(i));
  }
  if (rates[0] < 1.0) add("first rate below one");
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (!(rates[i] > rates[i - 1])) add("rates not strictly increasing", "level " + std::to_string(i));
    if (costs[i] < costs[i - 1]) add("costs not non-decreasing", "level " + std::to_string(i));
  }
  return report;
}

ValidationReport validate_instance(const Network& net, std::span<const Demand> demands,
                                   const StepCost& cost) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string detail = {}) {
    report.violations.push_back({std::move(kind), std::move(detail)});
  };

  std::unordered_set<std::string> names;
  for (const auto& n : net.names()) {
    if (!names.insert(n).second) add("duplicate node", n);
  }
  for (std::size_t pos = 0; pos < net.edge_count(); ++pos) {
    const Link& l = net.link(pos);
    const std::string tag = "edge " + std::to_string(l.id);
    if (l.id != pos) add("edge ids not dense", tag);
    if (l.u >= net.node_count() || l.v >= net.node_count()) {
      add("undeclared endpoint", tag);
    } else if (l.u == l.v) {
      add("self-loop", tag);
    }
  }

  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];
    const std::string tag = "demand " + std::to_string(i);
    if (d.amount < 1) add("non-positive amount", tag);
    if (d.source >= net.node_count() || d.sink >= net.node_count()) {
      add("unknown demand endpoint", tag);
      continue;
    }
    if (d.source == d.sink) {
      add("degenerate demand", tag);
      continue;
    }
    if (!net.connected(d.source, d.sink)) add("disconnected demand pair", tag);
  }

  for (auto& v : validate_step_cost(cost).violations) report.violations.push_back(std::move(v));
  return report;
}

ValidationReport validate_solution(const Network& net, std::span<const Demand> demands,
                                   const StepCost& cost, const IntegralSolution& sol) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string detail = {}) {
    report.violations.push_back({std::move(kind), std::move(detail)});
  };
  if (sol.paths.size() != demands.size()) {
    add("path count mismatch");
    return report;
  }
  if (sol.rate.size() != net.edge_count() || sol.loads.size() != net.edge_count()) {
    add("edge vector size mismatch");
    return report;
  }
  std::vector<std::int64_t> loads(net.edge_count(), 0);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Path& p = sol.paths[i];
    if (!is_simple_path(net, p, demands[i].source, demands[i].sink)) {
      add("path not simple or not connecting", "demand " + std::to_string(i));
      continue;
    }
    for (EdgeId e : p.edges) loads[e] += demands[i].amount;
  }
  double total = 0.0;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const std::string tag = "edge " + std::to_string(e);
    if (loads[e] != sol.loads[e]) add("load mismatch", tag);
    if (loads[e] == 0) {
      if (sol.rate[e]) add("idle edge has a rate", tag);
      continue;
    }
    if (!sol.rate[e]) {
      add("used edge is off", tag);
      continue;
    }
    std::size_t level = *sol.rate[e];
    if (level >= cost.size() || static_cast<double>(loads[e]) > cost.rate(level)) {
      add("rate below load", tag);
      continue;
    }
    if (level > 0 && static_cast<double>(loads[e]) <= cost.rate(level - 1)) add("rate not minimal", tag);
    total += cost.cost(level);
  }
  if (std::abs(total - sol.total_cost) > 1e-9 * std::max(1.0, std::abs(total))) add("total cost mismatch");
  return report;
}

}  // namespace greenroute
