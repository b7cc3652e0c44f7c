#pragma once

#include "capres/bounds.hpp"
#include "capres/network.hpp"
#include "capres/prox_flow.hpp"

#include <string>
#include <vector>

namespace capres {

struct SolverConfig {
  double mu = 0.05;        // rho-selection multiplier
  double alpha = 1.8;      // over-relaxation, in (0,2)
  double eps_rel = 0.01;   // relative-gap target
  int lb_every = 10;       // lower-bound cadence (iterations)
  int max_iters = 5000;
  double inner_tol = 1e-8;   // prox_flow KKT residual target
  double lp_tol = 1e-9;      // min-cost-flow tolerance (bounds)
  double feas_tol = 1e-6;    // conservation tolerance for a valid upper bound
  int workers = 0;           // 0 = hardware concurrency
  bool heuristic_only = false;

  void check() const;
};

enum class TerminationReason { kConverged, kIterationLimit, kHeuristicOnly };

std::string to_string(TerminationReason r);

struct IterRecord {
  int iter = 0;
  double upper = 0.0;
  double upper_best = 0.0;
  double lower = 0.0;      // only meaningful when has_lower
  bool has_lower = false;
  double lower_best = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double elapsed_s = 0.0;
};

// The ADMM triple plus bookkeeping. rho is fixed for the whole solve.
struct IterateState {
  Mat F;        // m x K, flow-update output (feasible columns)
  Mat F_tilde;  // m x K, reservation-update output
  Mat Pi;       // m x K, scenario-price dual
  int iter = 0;
  double rho = 0.0;
  double primal_residual = 0.0;  // ||F - F_tilde||_F
  double dual_residual = 0.0;    // rho * ||F_tilde(l+1) - F_tilde(l)||_F
  double worst_inner_residual = 0.0;
};

struct SolveReport {
  Vec reservation;             // row-max of the upper-bound witness
  BoundsCertificate certificate;
  Mat final_Pi;
  std::vector<IterRecord> history;
  TerminationReason reason = TerminationReason::kIterationLimit;
  int iterations = 0;
  double rho = 0.0;
  double heuristic_objective = 0.0;
  double lower_uniform = 0.0;
  std::vector<double> scenario_charges;  // pi^(k)^T f^(k) at the witnesses
  // Worst-case violations of the dual-iterate properties, tracked
  // every iteration.
  double worst_pi_negativity = 0.0;
  double worst_pi_rowsum_error = 0.0;
  double worst_tightness_error = 0.0;  // relative
  double solve_seconds = 0.0;
};

// rho = mu * (1^T p) / max_k (1^T f_heur^(k)); falls back to mu when
// every heuristic flow is zero.
double select_rho(const Instance& inst, const Mat& F_heur, double mu);

// F_tilde(0) = F_heur, Pi(0) = (1/K) p 1^T; consequence F(1) = F_tilde(0).
IterateState initialize(const Instance& inst, const Mat& F_heur, double rho);

// One ADMM iteration: K parallel flow proxes, m parallel row proxes,
// then the price update. Warm-start workspaces are per scenario.
void step(IterateState& state, const Instance& inst, const SolverConfig& cfg,
          const KktCache& cache, std::vector<ProxFlowWorkspace>* workspaces = nullptr);

// Full solve with best-to-date bound tracking and gap-certified
// termination. Throws on invalid or infeasible instances.
SolveReport solve(const Instance& inst, const SolverConfig& cfg = {});

}  // namespace capres
