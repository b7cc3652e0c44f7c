#pragma once

#include "capres/network.hpp"

namespace capres {

enum class FlowStatus { kOptimal, kInfeasible, kIterationLimit };

// Solution of a (linear or quadratic) capacitated flow problem, with
// the dual certificate needed for trustworthy lower bounds.
struct FlowSolution {
  Vec flow;             // m, clamped to [0, c]
  double objective = 0.0;
  double dual_objective = 0.0;  // certified; a true lower bound on the LP value
  Vec potentials;       // n node potentials
  Vec reduced_costs;    // m, price + y[tail] - y[head]
  FlowStatus status = FlowStatus::kOptimal;
  double conservation_residual = 0.0;  // ||A f + s||_inf
  double kkt_residual = 0.0;           // projected KKT residual (quadratic solves)
  int iterations = 0;
};

// Minimum-cost flow  min pi^T f  s.t.  A f + s = 0,  0 <= f <= c,
// solved by network simplex over real capacities with Bland's
// anti-cycling rule. Infeasibility is detected through phase-1
// artificial arcs priced at max(pi)*m + 1. The dual_objective is
// evaluated from the final potentials and is a valid lower bound on
// the LP value regardless of termination status.
FlowSolution min_cost_flow(const Network& net, const Vec& source, const Vec& prices,
                           double tol = 1e-9);

// Per-scenario feasibility, determined by a zero-price min-cost flow
// (pure phase 1) for each scenario.
struct FeasibilityReport {
  std::vector<bool> feasible;
  std::vector<double> residual;  // leftover artificial flow per scenario
  bool all_feasible = true;
};
FeasibilityReport check_feasibility(const Instance& inst, double tol = 1e-9);

}  // namespace capres
