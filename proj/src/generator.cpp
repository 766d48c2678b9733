#include "greenroute/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "greenroute/error.hpp"
#include "greenroute/execution.hpp"

namespace greenroute {

StepCost gen_rate_table(const RateTableSpec& spec, double min_top_rate, std::uint64_t seed) {
  if (spec.levels < 1) throw Error(Errc::invalid_argument, "rate table needs at least one level");
  if (!(spec.sigma_max >= 1.0)) throw Error(Errc::invalid_argument, "sigma_max must be >= 1");
  if (!(spec.beta_min <= spec.beta_max) || !(spec.base_cost_min > 0.0) ||
      !(spec.base_cost_min <= spec.base_cost_max)) {
    throw Error(Errc::invalid_argument, "invalid rate table ranges");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t m = spec.levels;

  std::vector<double> rates;
  const double top = std::max(std::ceil(min_top_rate), 2.0);
  if (m == 1) {
    rates.push_back(top);
  } else {
    const double first = 2.0 + std::floor(unit(rng) * 2.0);  // 2 or 3
    const double last = std::max(top, first + static_cast<double>(m - 1));
    rates.push_back(first);
    for (std::size_t i = 1; i < m; ++i) {
      const double target = first * std::pow(last / first, static_cast<double>(i) / static_cast<double>(m - 1));
      rates.push_back(std::max(std::round(target), rates.back() + 1.0));
    }
  }

  const double beta = spec.beta_min + (spec.beta_max - spec.beta_min) * unit(rng);
  const double base = spec.base_cost_min + (spec.base_cost_max - spec.base_cost_min) * unit(rng);
  std::vector<double> costs;
  for (std::size_t i = 0; i < m; ++i) {
    double y = base * std::pow(rates[i], beta) * (0.9 + 0.2 * unit(rng));
    if (i > 0) {
      const double prev = costs.back();
      y = std::clamp(y, prev, prev * spec.sigma_max);
      while (y / prev > spec.sigma_max) y = std::nextafter(y, prev);
    }
    costs.push_back(y);
  }
  return StepCost(std::move(rates), std::move(costs));
}

Instance gen_random(const RandomInstanceSpec& spec, std::uint64_t seed) {
  if (spec.nodes < 2) throw Error(Errc::invalid_argument, "need at least two nodes");
  if (!(spec.edge_prob > 0.0 && spec.edge_prob < 1.0)) throw Error(Errc::invalid_argument, "edge_prob must lie in (0, 1)");
  if (spec.demands < 1 || spec.max_amount < 1) throw Error(Errc::invalid_argument, "demand count and amount must be positive");

  std::mt19937_64 rng(mix_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.nodes; ++i) names.push_back("n" + std::to_string(i));

  for (std::size_t attempt = 0; attempt < spec.max_retries; ++attempt) {
    std::vector<Link> links;
    for (NodeIndex a = 0; a < spec.nodes; ++a) {
      for (NodeIndex b = a + 1; b < spec.nodes; ++b) {
        if (unit(rng) < spec.edge_prob) links.push_back({links.size(), a, b});
      }
    }
    Network net(names, std::move(links));

    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (NodeIndex a = 0; a < spec.nodes; ++a) {
      const auto dist = net.hop_distances(a);
      for (NodeIndex b = a + 1; b < spec.nodes; ++b) {
        if (dist[b] != static_cast<std::size_t>(-1)) pairs.emplace_back(a, b);
      }
    }
    if (pairs.size() < spec.demands) continue;

    std::shuffle(pairs.begin(), pairs.end(), rng);
    std::uniform_int_distribution<std::int64_t> amount(1, spec.max_amount);
    std::vector<Demand> demands;
    std::int64_t max_amount = 0;
    for (std::size_t i = 0; i < spec.demands; ++i) {
      auto [a, b] = pairs[i];
      if (unit(rng) < 0.5) std::swap(a, b);
      demands.push_back({a, b, amount(rng)});
      max_amount = std::max(max_amount, demands.back().amount);
    }
    const double top = static_cast<double>(spec.demands) * static_cast<double>(max_amount);
    StepCost cost = gen_rate_table(spec.rates, top, mix_seed(seed, 1));
    return Instance{std::move(net), std::move(demands), std::move(cost)};
  }
  throw Error(Errc::generation_failed, "could not generate connected instance");
}

Instance gen_edp_gadget(const Network& net, std::span<const std::pair<NodeIndex, NodeIndex>> pairs,
                        double rho, std::int64_t r1, double base_cost) {
  if (pairs.empty()) throw Error(Errc::invalid_argument, "gadget needs at least one pair");
  if (!(rho >= 1.0) || r1 < 1 || !(base_cost > 0.0)) throw Error(Errc::invalid_argument, "invalid gadget parameters");
  const auto k = static_cast<double>(pairs.size());
  const double w = static_cast<double>(net.edge_count());
  const auto low = static_cast<double>(r1);
  StepCost cost({low, std::max(k, 2.0) * low}, {base_cost, rho * w * base_cost * (1.0 + kGadgetMargin)});

  std::vector<std::string> names(net.names().begin(), net.names().end());
  std::vector<Link> links(net.links().begin(), net.links().end());
  std::vector<Demand> demands;
  for (auto [s, t] : pairs) demands.push_back({s, t, r1});
  return Instance{Network(std::move(names), std::move(links)), std::move(demands), std::move(cost)};
}

double edp_threshold(const Instance& gadget, double rho) {
  return rho * static_cast<double>(gadget.network.edge_count()) * gadget.cost.cost(0);
}

}  // namespace greenroute
