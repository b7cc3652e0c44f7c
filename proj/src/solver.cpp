#include "capres/solver.hpp"

#include "capres/parallel.hpp"
#include "capres/prox_max.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace capres {

void SolverConfig::check() const {
  if (mu <= 0) throw std::invalid_argument("config: mu must be positive");
  if (alpha <= 0 || alpha >= 2) throw std::invalid_argument("config: alpha must lie in (0,2)");
  if (eps_rel <= 0) throw std::invalid_argument("config: eps_rel must be positive");
  if (lb_every < 1) throw std::invalid_argument("config: lb_every must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
}

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::kConverged: return "converged";
    case TerminationReason::kIterationLimit: return "iteration-limit";
    case TerminationReason::kHeuristicOnly: return "heuristic-only";
  }
  return "unknown";
}

double select_rho(const Instance& inst, const Mat& F_heur, double mu) {
  if (mu <= 0) throw std::invalid_argument("select_rho: mu must be positive");
  const double denom = F_heur.colwise().sum().maxCoeff();
  if (denom <= 0) return mu;  // zero-demand instance
  return mu * inst.network.price.sum() / denom;
}

IterateState initialize(const Instance& inst, const Mat& F_heur, double rho) {
  IterateState st;
  const int K = inst.scenarios.count();
  st.F_tilde = F_heur;
  st.F = Mat::Zero(F_heur.rows(), K);
  st.Pi = (inst.network.price / K) * Eigen::RowVectorXd::Ones(K);
  st.iter = 0;
  st.rho = rho;
  return st;
}

void step(IterateState& state, const Instance& inst, const SolverConfig& cfg,
          const KktCache& cache, std::vector<ProxFlowWorkspace>* workspaces) {
  const Network& net = inst.network;
  const int m = net.edge_count();
  const int K = inst.scenarios.count();
  const double rho = state.rho;

  // Flow policy update: K independent quadratic flow proxes.
  std::vector<double> inner_residuals(K, 0.0);
  parallel_for(K, cfg.workers, [&](int k) {
    ProxFlowWorkspace* ws =
        (workspaces != nullptr) ? &(*workspaces)[k] : nullptr;
    FlowSolution s = prox_flow(net, inst.scenarios.source(k), state.Pi.col(k),
                               state.F_tilde.col(k), rho, cache, cfg.inner_tol, ws);
    state.F.col(k) = s.flow;
    inner_residuals[k] = s.kkt_residual;
  });
  state.worst_inner_residual = 0.0;
  for (double r : inner_residuals) {
    state.worst_inner_residual = std::max(state.worst_inner_residual, r);
  }

  state.primal_residual = (state.F - state.F_tilde).norm();

  // Reservation update: m independent row proxes.
  Mat F_tilde_new(m, K);
  parallel_for(m, cfg.workers, [&](int j) {
    const Vec u = (cfg.alpha * state.F.row(j) +
                   (1.0 - cfg.alpha) * state.F_tilde.row(j) + state.Pi.row(j) / rho)
                      .transpose();
    F_tilde_new.row(j) = prox_weighted_max(u, net.price[j] / rho).x.transpose();
  });

  state.dual_residual = rho * (F_tilde_new - state.F_tilde).norm();

  // Price update.
  state.Pi += rho * (cfg.alpha * state.F + (1.0 - cfg.alpha) * state.F_tilde -
                     F_tilde_new);
  state.F_tilde = std::move(F_tilde_new);
  ++state.iter;
}

namespace {

double lower_bound_parallel(const Instance& inst, const Mat& Pi, double tol,
                            int workers) {
  const int K = inst.scenarios.count();
  std::vector<double> duals(K, 0.0);
  parallel_for(K, workers, [&](int k) {
    const Vec pi_k = Pi.col(k).cwiseMax(0.0);
    FlowSolution s = min_cost_flow(inst.network, inst.scenarios.source(k), pi_k, tol);
    duals[k] = s.dual_objective;
  });
  double total = 0.0;
  for (int k = 0; k < K; ++k) total += duals[k];  // fixed reduction order
  return total;
}

}  // namespace

SolveReport solve(const Instance& inst, const SolverConfig& cfg) {
  cfg.check();
  {
    ValidationReport v = validate(inst);
    if (!v.ok()) {
      std::ostringstream os;
      os << "solve: invalid instance:";
      for (const auto& msg : v.violations) os << " [" << msg << "]";
      throw std::invalid_argument(os.str());
    }
  }
  const Network& net = inst.network;
  const int K = inst.scenarios.count();
  {
    FeasibilityReport f = check_feasibility(inst);
    if (!f.all_feasible) {
      std::ostringstream os;
      os << "solve: infeasible scenarios:";
      for (int k = 0; k < K; ++k) {
        if (!f.feasible[k]) os << " " << k + 1;
      }
      throw std::runtime_error(os.str());
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveReport rep;
  HeuristicResult heur = heuristic_policy(inst, cfg.lp_tol);
  rep.heuristic_objective = heur.objective;
  rep.lower_uniform = heur.lower_uniform;
  rep.rho = select_rho(inst, heur.flows, cfg.mu);

  // Bounds at iteration 0: the heuristic policy is the first upper
  // bound witness; the uniform prices (1/K) p 1^T certify the first
  // lower bound through the heuristic's own dual certificates.
  BoundsCertificate& cert = rep.certificate;
  cert.upper = heur.objective;
  cert.upper_witness = heur.flows;
  cert.upper_iter = 0;
  cert.lower = heur.lower_certified;
  cert.lower_witness = (net.price / K) * Eigen::RowVectorXd::Ones(K);
  cert.lower_iter = 0;

  auto gap_closed = [&]() {
    if (cert.upper <= 1e-12 && cert.lower >= -1e-12) return true;
    return cert.lower > 0 && cert.upper - cert.lower <= cfg.eps_rel * cert.lower;
  };

  if (cfg.heuristic_only) {
    rep.reservation = heur.flows.rowwise().maxCoeff();
    rep.final_Pi = cert.lower_witness;
    rep.reason = TerminationReason::kHeuristicOnly;
    rep.scenario_charges.resize(K);
    for (int k = 0; k < K; ++k) {
      rep.scenario_charges[k] = cert.lower_witness.col(k).dot(heur.flows.col(k));
    }
    rep.solve_seconds = elapsed();
    return rep;
  }

  if (gap_closed()) {
    rep.reservation = heur.flows.rowwise().maxCoeff();
    rep.final_Pi = cert.lower_witness;
    rep.reason = TerminationReason::kConverged;
    rep.scenario_charges.resize(K);
    for (int k = 0; k < K; ++k) {
      rep.scenario_charges[k] = cert.lower_witness.col(k).dot(heur.flows.col(k));
    }
    rep.solve_seconds = elapsed();
    return rep;
  }

  KktCache cache(net);
  IterateState st = initialize(inst, heur.flows, rep.rho);
  std::vector<ProxFlowWorkspace> workspaces(K);

  rep.reason = TerminationReason::kIterationLimit;
  for (int l = 1; l <= cfg.max_iters; ++l) {
    step(st, inst, cfg, cache, &workspaces);

    // Dual-iterate properties, tracked every iteration.
    rep.worst_pi_negativity =
        std::max(rep.worst_pi_negativity, -st.Pi.minCoeff());
    rep.worst_pi_rowsum_error = std::max(
        rep.worst_pi_rowsum_error,
        (st.Pi.rowwise().sum() - net.price).lpNorm<Eigen::Infinity>());
    const double tilde_value = net.price.dot(st.F_tilde.rowwise().maxCoeff());
    const double tightness =
        std::abs(st.Pi.cwiseProduct(st.F_tilde).sum() - tilde_value);
    rep.worst_tightness_error =
        std::max(rep.worst_tightness_error, tightness / (1.0 + std::abs(tilde_value)));

    IterRecord rec;
    rec.iter = l;
    rec.primal_residual = st.primal_residual;
    rec.dual_residual = st.dual_residual;

    // Upper bound from the feasible flow iterate.
    bool feasible_iterate = true;
    for (int k = 0; k < K; ++k) {
      const Vec s = inst.scenarios.source(k);
      const double res = (net.apply_incidence(st.F.col(k)) + s).lpNorm<Eigen::Infinity>();
      if (res > cfg.feas_tol * (1.0 + s.lpNorm<Eigen::Infinity>())) {
        feasible_iterate = false;
        break;
      }
    }
    const double U = net.price.dot(st.F.rowwise().maxCoeff());
    rec.upper = U;
    if (feasible_iterate && U < cert.upper) {
      cert.upper = U;
      cert.upper_witness = st.F;
      cert.upper_iter = l;
    }

    if (l % cfg.lb_every == 0) {
      const double L = lower_bound_parallel(inst, st.Pi, cfg.lp_tol, cfg.workers);
      rec.lower = L;
      rec.has_lower = true;
      if (L > cert.lower) {
        cert.lower = L;
        cert.lower_witness = st.Pi;
        cert.lower_iter = l;
      }
    }

    rec.upper_best = cert.upper;
    rec.lower_best = cert.lower;
    rec.rel_gap = (cert.lower > 0) ? (cert.upper - cert.lower) / cert.lower
                                   : std::numeric_limits<double>::infinity();
    rec.elapsed_s = elapsed();
    rep.history.push_back(rec);
    rep.iterations = l;

    if (gap_closed()) {
      rep.reason = TerminationReason::kConverged;
      break;
    }
  }
  rep.reservation = cert.upper_witness.rowwise().maxCoeff();
  rep.final_Pi = st.Pi;
  rep.scenario_charges.resize(K);
  for (int k = 0; k < K; ++k) {
    rep.scenario_charges[k] = cert.lower_witness.col(k).dot(cert.upper_witness.col(k));
  }
  rep.solve_seconds = elapsed();
  return rep;
}

}  // namespace capres
