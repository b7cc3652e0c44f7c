#pragma once

#include "capres/network.hpp"
#include "capres/network_simplex.hpp"

#include <optional>

namespace capres {

// Certified upper/lower bounds with their witnesses.
struct BoundsCertificate {
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  Mat upper_witness;  // feasible flow matrix, m x K
  Mat lower_witness;  // scenario price matrix, m x K
  int upper_iter = -1;
  int lower_iter = -1;

  double relative_gap() const {
    if (lower <= 0) return std::numeric_limits<double>::infinity();
    return (upper - lower) / lower;
  }
};

struct HeuristicResult {
  Mat flows;         // m x K, column k solves the scenario-k min-cost flow at prices p
  double objective;  // J_heur = p^T max_k f^(k)
  double lower_uniform;        // (1/K) sum_k p^T f^(k), the uniform-price lower bound
  double lower_certified;      // same bound from the dual certificates
  std::vector<double> scenario_costs;  // p^T f^(k)
};

// Greedy per-scenario policy: each column is a min-cost flow at the
// reservation prices. No more than K-suboptimal.
HeuristicResult heuristic_policy(const Instance& inst, double tol = 1e-9);

// Certified lower bound from valid scenario prices (Pi >= 0,
// Pi * 1 = p): the sum over scenarios of the dual value of the
// min-cost flow at prices Pi.col(k). Valid under inexact primal
// solves because only dual certificates enter the sum.
double lower_bound(const Instance& inst, const Mat& Pi, double tol = 1e-9);

struct UpperBoundResult {
  double value;     // p^T max(F)
  Vec reservation;  // row-wise max of F
};

// p^T row-max of a feasible flow matrix. Throws if any column violates
// conservation beyond tol*(1+||s||_inf).
UpperBoundResult upper_bound(const Instance& inst, const Mat& F, double tol = 1e-6);

// The three optimality conditions, reported independently:
// 1. Pi is a valid scenario price decomposition of p.
// 2. p^T max_k f^(k) equals sum_k pi^(k)^T f^(k).
// 3. Each f^(k) is optimal for the min-cost flow at prices pi^(k).
// Plus the complementarity pi_j^(k) (f_j^(k) - r_j) = 0 implied by 2.
struct OptimalityReport {
  bool prices_valid = false;
  bool tight = false;
  bool flows_optimal = false;
  bool complementary = false;
  double worst_price_violation = 0.0;
  double worst_tightness_violation = 0.0;
  double worst_flow_suboptimality = 0.0;
  double worst_complementarity_violation = 0.0;
  bool all() const { return prices_valid && tight && flows_optimal && complementary; }
};
OptimalityReport verify_optimality(const Instance& inst, const Mat& F, const Mat& Pi,
                                   double tol = 1e-6);

// Barycentric extension of a policy to the convex hull of the scenario
// sources: least-norm weights theta >= 0, 1^T theta = 1, S theta = s,
// then f = F * theta. Throws if s is outside the hull.
struct ExtendedFlow {
  Vec flow;
  Vec weights;
  double hull_residual;  // ||S theta - s||_inf
};
ExtendedFlow extend_policy(const Instance& inst, const Mat& F, const Vec& query_source);

}  // namespace capres
