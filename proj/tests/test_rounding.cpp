#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "greenroute/error.hpp"
#include "greenroute/generator.hpp"
#include "greenroute/pipeline.hpp"
#include "greenroute/rounding.hpp"
#include "test_support.hpp"

using namespace greenroute;
using namespace greenroute::testing;

TEST_CASE("half and half over a diamond") {
  auto inst = diamond({{"s", "t", 1}}, {2}, {1});
  const std::vector<double> y{0.5, 0.5, 0.5, 0.5};
  const PathDecomposition d = decompose_flow(inst.network, inst.demands[0], y, 1e-9);
  REQUIRE(d.paths.size() == 2);
  CHECK(d.paths[0].weight == doctest::Approx(0.5));
  CHECK(d.paths[1].weight == doctest::Approx(0.5));
  CHECK(d.paths[0].path.edges == std::vector<EdgeId>{0, 1});
  CHECK(d.paths[1].path.edges == std::vector<EdgeId>{2, 3});
  CHECK(d.total_weight() == doctest::Approx(1.0));
  CHECK(d.cumulative().back() == 1.0);
}

TEST_CASE("reverse-oriented flow decomposes along the net direction") {
  auto inst = make_instance({"a", "b", "c"}, {{"b", "a"}, {"c", "b"}}, {{"a", "c", 2}}, {2}, {1});
  const std::vector<double> y{-2, -2};
  const PathDecomposition d = decompose_flow(inst.network, inst.demands[0], y, 1e-9);
  REQUIRE(d.paths.size() == 1);
  CHECK(d.paths[0].path.nodes == std::vector<NodeIndex>{0, 1, 2});
  CHECK(d.paths[0].weight == doctest::Approx(2.0));
}

TEST_CASE("a unique path receives all the weight") {
  auto inst = path_abc();
  const std::vector<double> y{1, 1};
  const PathDecomposition d = decompose_flow(inst.network, inst.demands[0], y, 1e-9);
  REQUIRE(d.paths.size() == 1);
  CHECK(d.paths[0].weight == doctest::Approx(1.0));
  const auto chosen = sample_paths(std::span(&d, 1), 42);
  CHECK(chosen[0].edges == std::vector<EdgeId>{0, 1});
}

TEST_CASE("decompositions of relaxed flows are valid") {
  RandomInstanceSpec spec;
  spec.nodes = 7;
  spec.demands = 4;
  spec.max_amount = 3;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = gen_random(spec, seed);
    const PowerFit g = convex_fit(inst.cost, true);
    const auto sol = solve_fractional(inst.network, inst.demands, g);
    const double eps = 1e-6;
    for (std::size_t i = 0; i < inst.demands.size(); ++i) {
      const Demand& dem = inst.demands[i];
      const PathDecomposition d = decompose_flow(inst.network, inst.demands, sol, i, eps);
      CHECK(!d.paths.empty());
      CHECK(std::abs(d.total_weight() - static_cast<double>(dem.amount)) <= eps * inst.network.edge_count());
      std::vector<double> covered(inst.network.edge_count(), 0.0);
      for (const auto& wp : d.paths) {
        CHECK(wp.weight > 0.0);
        CHECK(is_simple_path(inst.network, wp.path, dem.source, dem.sink));
        for (EdgeId e : wp.path.edges) covered[e] += wp.weight;
      }
      for (EdgeId e = 0; e < inst.network.edge_count(); ++e) {
        CHECK(covered[e] <= sol.flow(i, e) + 1e-9);
      }
    }
  }
}

TEST_CASE("sampling frequencies follow the weights") {
  auto inst = make_instance({"s", "a", "b", "c", "t"},
                            {{"s", "a"}, {"a", "t"}, {"s", "b"}, {"b", "t"}, {"s", "c"}, {"c", "t"}},
                            {{"s", "t", 1}}, {2}, {1});
  const std::vector<double> y{0.2, 0.2, 0.5, 0.5, 0.3, 0.3};
  const PathDecomposition d = decompose_flow(inst.network, inst.demands[0], y, 1e-9);
  REQUIRE(d.paths.size() == 3);
  std::map<EdgeId, double> want;
  for (const auto& wp : d.paths) want[wp.path.edges[0]] = wp.weight;

  const int n = 10000;
  std::map<EdgeId, int> hits;
  for (int k = 0; k < n; ++k) hits[sample_paths(std::span(&d, 1), mix_seed(99, k))[0].edges[0]]++;
  for (auto [first, p] : want) {
    const double freq = static_cast<double>(hits[first]) / n;
    CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
  }

  CHECK(sample_paths(std::span(&d, 1), 5)[0] == sample_paths(std::span(&d, 1), 5)[0]);
}

TEST_CASE("empty decomposition cannot be sampled") {
  PathDecomposition empty;
  CHECK_THROWS_AS(sample_paths(std::span(&empty, 1), 1), Error);
}

TEST_CASE("rate assignment picks the minimal level") {
  auto inst = make_instance({"a", "b"}, {{"a", "b"}}, {{"a", "b", 3}}, {2, 4, 8}, {1, 3, 9});
  const std::vector<Path> p{Path{{0, 1}, {0}}};
  IntegralSolution s = assign_rates(inst.network, p, inst.demands, inst.cost);
  CHECK(s.loads[0] == 3);
  REQUIRE(s.rate[0].has_value());
  CHECK(inst.cost.rate(*s.rate[0]) == 4);
  CHECK(s.total_cost == 3);

  inst.demands[0].amount = 2;
  s = assign_rates(inst.network, p, inst.demands, inst.cost);
  CHECK(inst.cost.rate(*s.rate[0]) == 2);

  inst.demands[0].amount = 9;
  try {
    assign_rates(inst.network, p, inst.demands, inst.cost);
    FAIL("expected rate_overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::rate_overflow);
  }
}

TEST_CASE("rounding runs, validates and respects the per-trial inequality") {
  RandomInstanceSpec spec;
  spec.nodes = 6;
  spec.demands = 3;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = gen_random(spec, seed);
    const PowerFit g = convex_fit(inst.cost, true);
    const auto sol = solve_fractional(inst.network, inst.demands, g);
    RoundingConfig cfg;
    cfg.trials = seed == 1 ? 1 : 50;
    cfg.seed = seed;
    const RoundingResult r = round_solution(inst.network, inst.demands, sol, inst.cost, g, cfg);
    CHECK(validate_solution(inst.network, inst.demands, inst.cost, r.best).ok());
    CHECK(r.stats.trials == cfg.trials);
    CHECK(r.stats.feasible + r.stats.overflow == cfg.trials);
    CHECK(r.best.total_cost == r.stats.min);
    const double phi = std::max(g.phi, g.gap);
    for (const TrialRecord& t : r.records) {
      if (t.overflow) continue;
      if (intersects_each_step(inst.cost, g)) CHECK(t.cost_f <= phi * t.cost_g * (1 + 1e-12));
    }
  }
}

TEST_CASE("serial and parallel rounding agree") {
  RandomInstanceSpec spec;
  spec.nodes = 7;
  spec.demands = 4;
  spec.max_amount = 2;
  for (std::uint64_t seed = 3; seed <= 6; ++seed) {
    const Instance inst = gen_random(spec, seed);
    const PowerFit g = convex_fit(inst.cost, true);
    const auto sol = solve_fractional(inst.network, inst.demands, g);
    RoundingConfig a, b;
    a.trials = b.trials = 64;
    b.execution = Execution::parallel;
    const auto s = round_solution(inst.network, inst.demands, sol, inst.cost, g, a);
    const auto p = round_solution(inst.network, inst.demands, sol, inst.cost, g, b);
    CHECK(s.best_trial == p.best_trial);
    CHECK(s.best.total_cost == p.best.total_cost);
    CHECK(s.stats.mean == p.stats.mean);
    REQUIRE(s.records.size() == p.records.size());
    for (std::size_t t = 0; t < s.records.size(); ++t) CHECK(s.records[t].cost_f == p.records[t].cost_f);
  }
}

TEST_CASE("broken conservation is rejected") {
  auto inst = diamond({{"s", "t", 1}}, {2}, {1});
  const std::vector<double> y{1.0, 0.5, 0.0, 0.0};
  try {
    decompose_flow(inst.network, inst.demands[0], y, 1e-6);
    FAIL("expected malformed_flow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_flow);
  }
}

TEST_CASE("all trials overflowing is reported") {
  // Two unit demands forced onto one link whose top rate is 1.
  auto inst = make_instance({"a", "b"}, {{"a", "b"}}, {{"a", "b", 1}, {"b", "a", 1}}, {1, 1.5}, {1, 2});
  FractionalSolution sol;
  sol.flows = {{1.0}, {-1.0}};
  PowerFit g;
  g.mu = 1;
  g.beta = 1;
  RoundingConfig cfg;
  cfg.trials = 5;
  try {
    round_solution(inst.network, inst.demands, sol, inst.cost, g, cfg);
    FAIL("expected no_feasible_rounding");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_feasible_rounding);
  }
}
