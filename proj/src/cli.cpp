#include "capres/cli.hpp"

#include "capres/generators.hpp"
#include "capres/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace capres::cli {

CheckReport check_result(const Instance& inst, const ResultDocument& doc, double tol) {
  CheckReport rep;
  auto fail = [&rep](const std::string& msg) { rep.failures.push_back(msg); };
  const Network& net = inst.network;
  const int m = net.edge_count();
  const int K = inst.scenarios.count();

  if (doc.instance_fingerprint != fingerprint(inst)) {
    fail("instance fingerprint mismatch");
    return rep;
  }
  if (doc.reservation.size() != m) {
    fail("reservation length does not match edge count");
    return rep;
  }
  if (!doc.has_flows || !doc.has_prices) {
    fail("result lacks flow/price witnesses (solve with --flows to enable checking)");
    return rep;
  }
  if (doc.flows.rows() != m || doc.flows.cols() != K || doc.prices.rows() != m ||
      doc.prices.cols() != K) {
    fail("witness dimensions do not match the instance");
    return rep;
  }

  // Flow feasibility and reservation support.
  for (int k = 0; k < K; ++k) {
    const Vec s = inst.scenarios.source(k);
    const double res = (net.apply_incidence(doc.flows.col(k)) + s).lpNorm<Eigen::Infinity>();
    if (res > tol * (1.0 + s.lpNorm<Eigen::Infinity>())) {
      std::ostringstream os;
      os << "scenario " << k + 1 << " flow violates conservation by " << res;
      fail(os.str());
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < K; ++k) {
      const double f = doc.flows(j, k);
      if (f < -tol || f > net.capacity[j] + tol) {
        std::ostringstream os;
        os << "flow on edge " << j + 1 << ", scenario " << k + 1 << " outside [0, c]";
        fail(os.str());
      }
      if (f > doc.reservation[j] + tol) {
        std::ostringstream os;
        os << "reservation on edge " << j + 1 << " is below the scenario-" << k + 1
           << " flow";
        fail(os.str());
      }
    }
  }

  // Scenario price validity.
  const double p_scale = std::max(1.0, net.price.lpNorm<Eigen::Infinity>());
  if (doc.prices.minCoeff() < -tol * p_scale) {
    fail("scenario prices have negative entries");
  }
  const double row_err = (doc.prices.rowwise().sum() - net.price).lpNorm<Eigen::Infinity>();
  if (row_err > tol * p_scale) {
    std::ostringstream os;
    os << "scenario price rows do not sum to p (worst error " << row_err << ")";
    fail(os.str());
  }

  // Recompute both bounds from the witnesses.
  const double U = net.price.dot(doc.flows.rowwise().maxCoeff());
  if (std::abs(U - doc.upper) > tol * (1.0 + std::abs(U))) {
    std::ostringstream os;
    os << "stated upper bound " << doc.upper << " differs from recomputed " << U;
    fail(os.str());
  }
  if (rep.pass()) {
    double L = 0.0;
    for (int k = 0; k < K; ++k) {
      const Vec pi_k = doc.prices.col(k).cwiseMax(0.0);
      L += min_cost_flow(net, inst.scenarios.source(k), pi_k).dual_objective;
    }
    if (L < doc.lower - tol * (1.0 + std::abs(L))) {
      std::ostringstream os;
      os << "stated lower bound " << doc.lower << " is not certified (recomputed " << L
         << ")";
      fail(os.str());
    }
    if (doc.lower > 0) {
      const double gap = (doc.upper - doc.lower) / doc.lower;
      if (std::abs(gap - doc.rel_gap) > 1e-9 * (1.0 + std::abs(gap))) {
        fail("stated relative gap is inconsistent with the stated bounds");
      }
    }
  }
  return rep;
}

namespace {

int run_generate(const std::string& kind, int a, double eps, int n, int m, int k,
                 std::uint64_t seed, const std::string& out) {
  Instance inst;
  if (kind == "layered") {
    inst = generate_layered(a, eps);
  } else if (kind == "random-continuous") {
    inst = generate_random(n, m, k, SourceStyle::kContinuous, seed);
  } else if (kind == "random-discrete") {
    inst = generate_random(n, m, k, SourceStyle::kDiscrete, seed);
  } else {
    std::cerr << "unknown instance kind: " << kind << "\n";
    return 1;
  }
  write_instance(inst, out);
  std::cout << "wrote " << out << ": n=" << inst.network.node_count
            << " m=" << inst.network.edge_count() << " K=" << inst.scenarios.count()
            << "\n";
  return 0;
}

int run_solve(const std::string& instance_path, const std::string& out,
              const std::string& history_path, const SolverConfig& cfg,
              bool include_flows) {
  Instance inst = read_instance(instance_path);
  FeasibilityReport feas = check_feasibility(inst);
  if (!feas.all_feasible) {
    std::cerr << "instance is infeasible:\n";
    for (size_t k = 0; k < feas.feasible.size(); ++k) {
      if (!feas.feasible[k]) {
        std::cerr << "  scenario " << k + 1 << ": no feasible flow (residual "
                  << feas.residual[k] << ")\n";
      }
    }
    return 1;
  }
  SolveReport rep = solve(inst, cfg);
  if (!out.empty()) write_result(rep, inst, cfg, include_flows, out);
  if (!history_path.empty()) write_history(rep.history, history_path);
  std::cout << "termination: " << to_string(rep.reason) << "\n"
            << "iterations:  " << rep.iterations << "\n"
            << "upper bound: " << rep.certificate.upper << "\n"
            << "lower bound: " << rep.certificate.lower << "\n"
            << "rel gap:     " << rep.certificate.relative_gap() << "\n"
            << "heuristic:   " << rep.heuristic_objective << "\n";
  if (rep.reason == TerminationReason::kIterationLimit) return 2;
  return 0;
}

int run_check(const std::string& instance_path, const std::string& result_path,
              double tol) {
  Instance inst = read_instance(instance_path);
  ResultDocument doc = read_result(result_path);
  CheckReport rep = check_result(inst, doc, tol);
  if (rep.pass()) {
    std::cout << "certificate check passed\n";
    return 0;
  }
  std::cerr << "certificate check FAILED:\n";
  for (const auto& f : rep.failures) std::cerr << "  " << f << "\n";
  return 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"capacity reservation solver"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write an instance file");
  std::string kind;
  gen->add_option("kind", kind, "layered | random-continuous | random-discrete")
      ->required();
  int a = 3, n = 10, m = 20, k = 4;
  double eps = 0.01;
  std::uint64_t seed = 0;
  std::string out = "instance.json";
  gen->add_option("--a", a, "layered: layer width");
  gen->add_option("--eps", eps, "layered: first-layer price");
  gen->add_option("--n", n, "random: node count");
  gen->add_option("--m", m, "random: edge count");
  gen->add_option("--k", k, "random: scenario count");
  gen->add_option("--seed", seed, "random: RNG seed");
  gen->add_option("--out", out, "output path");

  // solve
  auto* slv = app.add_subcommand("solve", "solve an instance");
  std::string instance_path, result_out, history_path;
  SolverConfig cfg;
  bool include_flows = false;
  slv->add_option("instance", instance_path, "instance JSON file")->required();
  slv->add_option("--out", result_out, "result JSON path");
  slv->add_option("--history", history_path, "history CSV path");
  slv->add_option("--mu", cfg.mu, "rho selection multiplier");
  slv->add_option("--alpha", cfg.alpha, "over-relaxation in (0,2)");
  slv->add_option("--eps-rel", cfg.eps_rel, "relative gap target");
  slv->add_option("--max-iters", cfg.max_iters, "iteration cap");
  slv->add_option("--lb-every", cfg.lb_every, "lower-bound cadence");
  slv->add_option("--workers", cfg.workers, "worker threads (0 = auto)");
  slv->add_flag("--heuristic-only", cfg.heuristic_only, "stop after the heuristic policy");
  slv->add_flag("--flows", include_flows, "embed the full flow matrix in the result");

  // check
  auto* chk = app.add_subcommand("check", "re-verify a result certificate");
  std::string chk_instance, chk_result;
  double chk_tol = 1e-6;
  chk->add_option("instance", chk_instance, "instance JSON file")->required();
  chk->add_option("result", chk_result, "result JSON file")->required();
  chk->add_option("--tol", chk_tol, "verification tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return run_generate(kind, a, eps, n, m, k, seed, out);
    if (slv->parsed())
      return run_solve(instance_path, result_out, history_path, cfg, include_flows);
    if (chk->parsed()) return run_check(chk_instance, chk_result, chk_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace capres::cli
