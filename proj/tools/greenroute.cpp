// greenroute: command-line front end for rate-adaptive energy-efficient routing.
//
//   greenroute fit    instance.json
//   greenroute relax  instance.json [--tol 1e-4] [--clamp-beta]
//   greenroute solve  instance.json [--trials 200] [--seed 1] [--tol 1e-4] [--clamp-beta]
//   greenroute oracle instance.json [--max-paths 64] [--max-combinations 1000000]
//   greenroute gen    [--nodes 6 --edge-prob 0.5 --demands 3 ...] | --edp-gadget graph.json --rho 2
//   greenroute bench  [--count 20] [--seed 7] [--trials 200]
//
// Results go to stdout (or --out); failures print {"error": {...}} on stderr
// and exit with status 1.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "greenroute/error.hpp"
#include "greenroute/generator.hpp"
#include "greenroute/instance_io.hpp"
#include "greenroute/oracle.hpp"
#include "greenroute/pipeline.hpp"
#include "greenroute/report.hpp"

namespace gr = greenroute;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double tol = 1e-4;
  std::size_t trials = 200;
  std::string out;
  bool parallel = false;
  int threads = 0;
  bool clamp_beta = false;
  std::size_t max_iterations = 5000;
  std::string step_rule = "line-search";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw gr::Error(gr::Errc::invalid_argument, "cannot write " + g.out);
  f << text;
}

void emit(const Globals& g, const gr::json& doc) { emit(g, doc.dump(2) + "\n"); }

gr::Execution execution(const Globals& g) { return g.parallel ? gr::Execution::parallel : gr::Execution::serial; }

gr::SolverConfig solver_config(const Globals& g) {
  gr::SolverConfig cfg;
  cfg.rel_gap_tol = g.tol;
  cfg.max_iterations = g.max_iterations;
  cfg.clamp_beta = g.clamp_beta;
  cfg.execution = execution(g);
  if (g.step_rule == "diminishing") {
    cfg.step_rule = gr::StepRule::diminishing;
  } else if (g.step_rule != "line-search") {
    throw gr::Error(gr::Errc::invalid_argument, "unknown step rule " + g.step_rule);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient routing with discrete link rates"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--tol", g.tol, "Relative duality-gap tolerance of the relaxation");
  app.add_option("--trials", g.trials, "Rounding trials");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_flag("--parallel", g.parallel, "Use the OpenMP kernels");
  app.add_option("--threads", g.threads, "OpenMP thread count");
  app.add_flag("--clamp-beta", g.clamp_beta, "Use beta = 1 when the fitted exponent is below 1");
  app.add_option("--max-iter", g.max_iterations, "Relaxation iteration cap");
  app.add_option("--step-rule", g.step_rule, "line-search or diminishing");

  std::string input;
  auto* fit = app.add_subcommand("fit", "Fit g(x) = mu x^beta to the rate table");
  fit->add_option("input", input, "Instance JSON ('-' for stdin)")->required();

  auto* relax = app.add_subcommand("relax", "Solve the fractional relaxation");
  relax->add_option("input", input, "Instance JSON")->required();

  auto* solve = app.add_subcommand("solve", "Fit, relax and round");
  solve->add_option("input", input, "Instance JSON")->required();

  gr::OracleBudget budget;
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by exhaustive search");
  oracle->add_option("input", input, "Instance JSON")->required();
  oracle->add_option("--max-paths", budget.max_paths_per_demand, "Paths enumerated per demand");
  oracle->add_option("--max-combinations", budget.max_combinations, "Routing combinations scanned");

  gr::RandomInstanceSpec spec;
  std::string gadget;
  double rho = 2.0;
  std::int64_t gadget_r1 = 1;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--nodes", spec.nodes);
  gen->add_option("--edge-prob", spec.edge_prob);
  gen->add_option("--demands", spec.demands);
  gen->add_option("--max-amount", spec.max_amount);
  gen->add_option("--levels", spec.rates.levels);
  gen->add_option("--sigma-max", spec.rates.sigma_max);
  gen->add_option("--beta-min", spec.rates.beta_min);
  gen->add_option("--beta-max", spec.rates.beta_max);
  gen->add_option("--edp-gadget", gadget, "Graph + pairs JSON (nodes, edges, demands) to turn into a gadget");
  gen->add_option("--rho", rho, "Gadget approximation factor");
  gen->add_option("--r1", gadget_r1, "Gadget low rate (integer)");

  gr::BenchSpec bench_spec;
  auto* bench = app.add_subcommand("bench", "Run generated instances through solve and oracle, emit CSV");
  bench->add_option("--count", bench_spec.count);
  bench->add_option("--nodes", bench_spec.instances.nodes);
  bench->add_option("--edge-prob", bench_spec.instances.edge_prob);
  bench->add_option("--demands", bench_spec.instances.demands);
  bench->add_option("--max-amount", bench_spec.instances.max_amount);
  bench->add_option("--levels", bench_spec.instances.rates.levels);
  bench->add_option("--sigma-max", bench_spec.instances.rates.sigma_max);

  CLI11_PARSE(app, argc, argv);

  try {
    if (g.threads > 0) gr::set_threads(g.threads);

    if (*fit) {
      const gr::json doc = gr::read_json_file(input);
      const gr::StepCost cost = gr::step_cost_from_json(doc);
      emit(g, gr::fit_report(cost, gr::fit_power_law(cost)));
    } else if (*relax) {
      const gr::Instance inst = gr::instance_from_json(gr::read_json_file(input));
      const gr::SolverConfig cfg = solver_config(g);
      const gr::PowerFit f = gr::convex_fit(inst.cost, cfg.clamp_beta);
      const gr::FractionalSolution sol = gr::solve_fractional(inst.network, inst.demands, f, cfg);
      emit(g, gr::fractional_report(inst.network, sol, cfg.epsilon_flow));
    } else if (*solve) {
      const gr::Instance inst = gr::instance_from_json(gr::read_json_file(input));
      gr::PipelineConfig cfg;
      cfg.solver = solver_config(g);
      cfg.rounding.trials = g.trials;
      cfg.rounding.seed = g.seed;
      cfg.rounding.execution = execution(g);
      emit(g, gr::solve_report(inst, gr::solve_pipeline(inst, cfg)));
    } else if (*oracle) {
      const gr::Instance inst = gr::instance_from_json(gr::read_json_file(input));
      const gr::OracleResult r = gr::solve_exact(inst.network, inst.demands, inst.cost, budget, execution(g));
      emit(g, gr::oracle_report(inst.network, r));
    } else if (*gen) {
      if (!gadget.empty()) {
        gr::json doc = gr::read_json_file(gadget);
        if (!doc.contains("rates")) doc["rates"] = gr::json::array({{{"speed", 1}, {"cost", 1}}});
        const gr::Instance base = gr::instance_from_json(doc);
        std::vector<std::pair<gr::NodeIndex, gr::NodeIndex>> pairs;
        for (const gr::Demand& d : base.demands) pairs.emplace_back(d.source, d.sink);
        emit(g, gr::to_json(gr::gen_edp_gadget(base.network, pairs, rho, gadget_r1)));
      } else {
        emit(g, gr::to_json(gr::gen_random(spec, g.seed)));
      }
    } else if (*bench) {
      bench_spec.seed = g.seed;
      bench_spec.pipeline.solver = solver_config(g);
      bench_spec.pipeline.solver.clamp_beta = true;
      bench_spec.pipeline.rounding.trials = g.trials;
      emit(g, gr::bench_csv(gr::run_bench(bench_spec, gr::Execution::parallel)));
    }
  } catch (const gr::Error& e) {
    std::cerr << gr::error_report(gr::to_string(e.code()), e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << gr::error_report("internal", e.what()).dump() << "\n";
    return 1;
  }
  return 0;
}
