#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace greenroute {

using NodeIndex = std::size_t;
using EdgeId = std::size_t;

struct Link {
  EdgeId id = 0;
  NodeIndex u = 0;
  NodeIndex v = 0;

  NodeIndex other(NodeIndex end) const { return end == u ? v : u; }
};

struct Incidence {
  EdgeId edge;
  NodeIndex neighbor;
};

// Undirected multigraph. Links are stored in id order; parallel links are
// distinct resources. The constructor does not reject malformed input so that
// validate_instance() can report it; algorithms assume a validated network.
class Network {
 public:
  Network() = default;
  Network(std::vector<std::string> node_names, std::vector<Link> links);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return links_.size(); }

  const Link& link(EdgeId id) const { return links_[id]; }
  std::span<const Link> links() const { return links_; }

  // Sorted by (neighbor, edge id). Self-loops and dangling ends are skipped.
  std::span<const Incidence> incident(NodeIndex node) const { return adjacency_[node]; }

  const std::string& name(NodeIndex node) const { return names_[node]; }
  std::span<const std::string> names() const { return names_; }
  std::optional<NodeIndex> find(std::string_view name) const;

  bool connected(NodeIndex a, NodeIndex b) const;
  // Hop distance from `from` to every node; SIZE_MAX when unreachable.
  std::vector<std::size_t> hop_distances(NodeIndex from) const;

 private:
  std::vector<std::string> names_;
  std::vector<Link> links_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::string, NodeIndex> index_;
};

struct Demand {
  NodeIndex source = 0;
  NodeIndex sink = 0;
  std::int64_t amount = 1;
};

// Discrete rate/cost table: f(x) = costs[i] for the minimal i with x <= rates[i].
class StepCost {
 public:
  StepCost() = default;
  StepCost(std::vector<double> rates, std::vector<double> costs)
      : rates_(std::move(rates)), costs_(std::move(costs)) {}

  std::size_t size() const { return rates_.size(); }
  std::span<const double> rates() const { return rates_; }
  std::span<const double> costs() const { return costs_; }
  double rate(std::size_t i) const { return rates_[i]; }
  double cost(std::size_t i) const { return costs_[i]; }
  double max_rate() const { return rates_.back(); }

  // Index of the minimal rate supporting load x. Throws exceeds_max_rate for
  // x > R_m and domain_error for x <= 0.
  std::size_t level_for(double x) const;
  double eval(double x) const { return costs_[level_for(x)]; }

 private:
  std::vector<double> rates_;
  std::vector<double> costs_;
};

double step_cost_eval(const StepCost& cost, double x);

// Fitted continuous cost g(x) = mu * x^beta plus interpolation statistics.
struct PowerFit {
  double mu = 1.0;
  double beta = 1.0;
  double gap = 1.0;    // max over [1, R_m] of max(f/g, g/f)
  double sigma = 1.0;  // max adjacent cost ratio y_i / y_{i-1}
  double phi = 1.0;    // max(sigma, f(1) / mu)

  double log_mu() const;
  // g(0) is 0: an idle link draws nothing.
  double eval(double x) const;
  double derivative(double x) const;
};

// A simple path given as a node sequence with the link taken at every hop, so
// parallel links are distinguished.
struct Path {
  std::vector<NodeIndex> nodes;
  std::vector<EdgeId> edges;

  std::size_t hops() const { return edges.size(); }
  bool operator==(const Path&) const = default;
};

bool is_simple_path(const Network& net, const Path& path, NodeIndex from, NodeIndex to);

struct FractionalSolution {
  // Signed net flow of each demand per edge: positive means u -> v.
  std::vector<std::vector<double>> flows;
  std::vector<double> loads;  // sum over demands of |flow|
  double objective = 0.0;     // sum_e g(load_e)
  double lower_bound = 0.0;   // certified lower bound on the relaxed optimum
  double duality_gap = 0.0;   // (objective - lower_bound) / objective
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;

  double flow(std::size_t demand, EdgeId edge) const;
};

struct IntegralSolution {
  std::vector<Path> paths;                       // one per demand
  std::vector<std::optional<std::size_t>> rate;  // level index per edge; nullopt = off
  std::vector<std::int64_t> loads;
  double total_cost = 0.0;
};

struct Instance {
  Network network;
  std::vector<Demand> demands;
  StepCost cost;
};

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view kind) const;
  std::string summary() const;
};

ValidationReport validate_step_cost(const StepCost& cost);
ValidationReport validate_instance(const Network& net, std::span<const Demand> demands,
                                   const StepCost& cost);

// Recomputes loads from the chosen paths and checks the solution invariants:
// simple connecting paths, the minimal supporting rate on every used link,
// and the cost sum.
ValidationReport validate_solution(const Network& net, std::span<const Demand> demands,
                                   const StepCost& cost, const IntegralSolution& sol);

}  // namespace greenroute
