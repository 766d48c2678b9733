#pragma once

// Shared fixtures and independent reference computations for the test
// binaries. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "greenroute/model.hpp"

namespace greenroute::testing {

struct EdgeSpec {
  std::string u, v;
};
struct DemandSpec {
  std::string src, dst;
  std::int64_t amount = 1;
};

inline Instance make_instance(const std::vector<std::string>& nodes, const std::vector<EdgeSpec>& edges,
                              const std::vector<DemandSpec>& demands, std::vector<double> rates,
                              std::vector<double> costs) {
  Network lookup(nodes, {});
  std::vector<Link> links;
  for (const auto& e : edges) links.push_back({links.size(), *lookup.find(e.u), *lookup.find(e.v)});
  std::vector<Demand> ds;
  for (const auto& d : demands) ds.push_back({*lookup.find(d.src), *lookup.find(d.dst), d.amount});
  return Instance{Network(nodes, std::move(links)), std::move(ds), StepCost(std::move(rates), std::move(costs))};
}

// a - b - c
inline Instance path_abc(std::vector<double> rates = {2, 4}, std::vector<double> costs = {1, 3}) {
  return make_instance({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, {{"a", "c", 1}}, std::move(rates),
                       std::move(costs));
}

// s - a - t and s - b - t
inline Instance diamond(std::vector<DemandSpec> demands, std::vector<double> rates, std::vector<double> costs) {
  return make_instance({"s", "a", "b", "t"}, {{"s", "a"}, {"a", "t"}, {"s", "b"}, {"b", "t"}}, std::move(demands),
                       std::move(rates), std::move(costs));
}

inline Instance k4(std::vector<DemandSpec> demands) {
  return make_instance({"a", "b", "c", "d"},
                       {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}},
                       std::move(demands), {2, 4}, {1, 3});
}

// ---------------------------------------------------------------------------
// Fitting reference: minimise the integrated squared log error by grid search
// followed by cyclic golden-section refinement, with the integral evaluated by
// composite Simpson quadrature directly from the step function.

inline double quadrature_h(const std::vector<double>& rates, const std::vector<double>& costs, double log_mu,
                           double beta, int panels = 8) {
  double total = 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double b = std::log(rates[i]);
    const double v = std::log(costs[i]);
    auto integrand = [&](double w) {
      const double r = v - (log_mu + beta * w);
      return r * r;
    };
    const double h = (b - a) / (2 * panels);
    double s = integrand(a) + integrand(b);
    for (int k = 1; k < 2 * panels; ++k) s += integrand(a + k * h) * (k % 2 ? 4.0 : 2.0);
    total += s * h / 3.0;
    a = b;
  }
  return total;
}

inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

struct ReferenceFit {
  double log_mu;
  double beta;
};

inline ReferenceFit grid_search_fit(const std::vector<double>& rates, const std::vector<double>& costs) {
  auto H = [&](double m, double b) { return quadrature_h(rates, costs, m, b); };
  const double vmin = std::log(costs.front()), vmax = std::log(costs.back());
  double best_m = 0, best_b = 0, best = std::numeric_limits<double>::infinity();
  const int n = 80;
  const double m_lo = vmin - 10.0, m_hi = vmax + 10.0, b_lo = -10.0, b_hi = 10.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double m = m_lo + (m_hi - m_lo) * i / n, b = b_lo + (b_hi - b_lo) * j / n;
      const double h = H(m, b);
      if (h < best) {
        best = h;
        best_m = m;
        best_b = b;
      }
    }
  }
  double span_m = (m_hi - m_lo) / n * 2, span_b = (b_hi - b_lo) / n * 2;
  for (int cycle = 0; cycle < 400; ++cycle) {
    const double pm = best_m, pb = best_b;
    best_m = golden_min([&](double m) { return H(m, best_b); }, best_m - span_m, best_m + span_m, 1e-13);
    best_b = golden_min([&](double b) { return H(best_m, b); }, best_b - span_b, best_b + span_b, 1e-13);
    if (std::abs(best_m - pm) < 1e-12 && std::abs(best_b - pb) < 1e-12) break;
  }
  return {best_m, best_b};
}

// Gap by dense sampling of each step's closure [R_{i-1}, R_i] (first step
// [1, R_1]) against that step's level.
inline double dense_gap(const std::vector<double>& rates, const std::vector<double>& costs, double mu,
                        double beta, int per_step = 10000) {
  double gap = 1.0;
  double lo = 1.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    for (int k = 0; k <= per_step; ++k) {
      const double x = lo + (rates[i] - lo) * k / per_step;
      const double g = mu * std::pow(x, beta);
      gap = std::max({gap, g / costs[i], costs[i] / g});
    }
    lo = rates[i];
  }
  return gap;
}

// Random step function with m levels and adjacent cost ratio in [1, sigma].
struct RandomStep {
  std::vector<double> rates, costs;
};

inline RandomStep random_step_function(std::mt19937_64& rng, std::size_t m, double sigma) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomStep s;
  double r = 1.0 + 2.0 * unit(rng);
  if (m == 1 && r < 1.5) r += 1.0;
  double y = 0.5 + 10.0 * unit(rng);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      r *= 1.2 + 1.8 * unit(rng);
      y *= 1.0 + (sigma - 1.0) * unit(rng);
    }
    s.rates.push_back(r);
    s.costs.push_back(y);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Graph references built on an adjacency matrix, independent of the library's
// path machinery.

inline std::size_t count_simple_paths(const std::vector<std::vector<int>>& adj, std::size_t s, std::size_t t) {
  std::vector<char> used(adj.size(), 0);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t n) -> std::size_t {
    if (n == t) return 1;
    used[n] = 1;
    std::size_t c = 0;
    for (std::size_t m = 0; m < adj.size(); ++m) {
      if (!used[m]) c += static_cast<std::size_t>(adj[n][m]) * go(m);
    }
    used[n] = 0;
    return c;
  };
  return go(s);
}

// Edge sets of all simple s-t paths.
inline std::vector<std::vector<EdgeId>> path_edge_sets(const Network& net, NodeIndex s, NodeIndex t) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<char> used(net.node_count(), 0);
  std::vector<EdgeId> cur;
  std::function<void(NodeIndex)> go = [&](NodeIndex n) {
    if (n == t) {
      out.push_back(cur);
      return;
    }
    used[n] = 1;
    for (const Link& l : net.links()) {
      if (l.u != n && l.v != n) continue;
      const NodeIndex m = l.other(n);
      if (used[m]) continue;
      cur.push_back(l.id);
      go(m);
      cur.pop_back();
    }
    used[n] = 0;
  };
  go(s);
  return out;
}

inline bool edge_disjoint_paths_exist(const Network& net, const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs) {
  std::vector<std::vector<std::vector<EdgeId>>> options;
  for (auto [s, t] : pairs) options.push_back(path_edge_sets(net, s, t));
  std::vector<int> taken(net.edge_count(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == options.size()) return true;
    for (const auto& p : options[i]) {
      if (std::any_of(p.begin(), p.end(), [&](EdgeId e) { return taken[e] != 0; })) continue;
      for (EdgeId e : p) taken[e] = 1;
      const bool ok = go(i + 1);
      for (EdgeId e : p) taken[e] = 0;
      if (ok) return true;
    }
    return false;
  };
  return go(0);
}

}  // namespace greenroute::testing
