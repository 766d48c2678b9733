#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "greenroute/model.hpp"

namespace greenroute {

struct RateTableSpec {
  std::size_t levels = 3;  // m
  double sigma_max = 2.0;  // cap on y_i / y_{i-1}
  // Costs follow base * R^beta with beta drawn from this range, then jitter
  // and the ratio cap are applied.
  double beta_min = 1.2;
  double beta_max = 2.5;
  double base_cost_min = 1.0;
  double base_cost_max = 10.0;
};

struct RandomInstanceSpec {
  std::size_t nodes = 6;
  double edge_prob = 0.5;
  std::size_t demands = 3;
  std::int64_t max_amount = 1;  // amounts uniform in [1, max_amount]
  RateTableSpec rates;
  std::size_t max_retries = 100;
};

// G(n, p) graph with demands on distinct connected node pairs and a rate table
// whose top rate carries every demand at once. Throws generation_failed after
// max_retries graphs without enough connected pairs.
Instance gen_random(const RandomInstanceSpec& spec, std::uint64_t seed);

StepCost gen_rate_table(const RateTableSpec& spec, double min_top_rate, std::uint64_t seed);

inline constexpr double kGadgetMargin = 0.01;

// Two-rate instance reducing edge-disjoint paths to routing cost: rates
// R1 = r1 and R2 = max(k, 2) * r1, one demand of R1 per pair, and
// f(R2) = rho * |E| * f(R1) * (1 + kGadgetMargin).
Instance gen_edp_gadget(const Network& net, std::span<const std::pair<NodeIndex, NodeIndex>> pairs,
                        double rho, std::int64_t r1 = 1, double base_cost = 1.0);

// rho * |E| * f(R1): optimal cost is at most this iff the pairs admit
// edge-disjoint paths.
double edp_threshold(const Instance& gadget, double rho);

}  // namespace greenroute
