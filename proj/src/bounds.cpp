#include "capres/bounds.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace capres {

HeuristicResult heuristic_policy(const Instance& inst, double tol) {
  const Network& net = inst.network;
  const int K = inst.scenarios.count();
  const int m = net.edge_count();
  HeuristicResult res;
  res.flows.resize(m, K);
  res.scenario_costs.resize(K);
  double dual_sum = 0.0;
  double cost_sum = 0.0;
  for (int k = 0; k < K; ++k) {
    FlowSolution s = min_cost_flow(net, inst.scenarios.source(k), net.price, tol);
    if (s.status == FlowStatus::kInfeasible) {
      std::ostringstream os;
      os << "heuristic_policy: scenario " << k + 1 << " is infeasible";
      throw std::runtime_error(os.str());
    }
    res.flows.col(k) = s.flow;
    res.scenario_costs[k] = s.objective;
    cost_sum += s.objective;
    dual_sum += s.dual_objective;
  }
  res.objective = net.price.dot(res.flows.rowwise().maxCoeff());
  res.lower_uniform = cost_sum / K;
  res.lower_certified = dual_sum / K;
  return res;
}

double lower_bound(const Instance& inst, const Mat& Pi, double tol) {
  const Network& net = inst.network;
  const int m = net.edge_count();
  const int K = inst.scenarios.count();
  if (Pi.rows() != m || Pi.cols() != K) {
    throw std::invalid_argument("lower_bound: price matrix dimension mismatch");
  }
  const double p_scale = std::max(1.0, net.price.lpNorm<Eigen::Infinity>());
  if (Pi.minCoeff() < -1e-9 * p_scale) {
    throw std::invalid_argument("lower_bound: scenario prices have negative entries");
  }
  const Vec row_sums = Pi.rowwise().sum();
  if ((row_sums - net.price).lpNorm<Eigen::Infinity>() > 1e-9 * p_scale) {
    throw std::invalid_argument("lower_bound: scenario prices do not sum to p");
  }
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const Vec pi_k = Pi.col(k).cwiseMax(0.0);
    FlowSolution s = min_cost_flow(net, inst.scenarios.source(k), pi_k, tol);
    total += s.dual_objective;
  }
  return total;
}

UpperBoundResult upper_bound(const Instance& inst, const Mat& F, double tol) {
  const Network& net = inst.network;
  if (F.rows() != net.edge_count() || F.cols() != inst.scenarios.count()) {
    throw std::invalid_argument("upper_bound: flow matrix dimension mismatch");
  }
  for (int k = 0; k < F.cols(); ++k) {
    const Vec s = inst.scenarios.source(k);
    const double res = (net.apply_incidence(F.col(k)) + s).lpNorm<Eigen::Infinity>();
    if (res > tol * (1.0 + s.lpNorm<Eigen::Infinity>())) {
      std::ostringstream os;
      os << "upper_bound: scenario " << k + 1 << " violates conservation by " << res;
      throw std::invalid_argument(os.str());
    }
  }
  UpperBoundResult out;
  out.reservation = F.rowwise().maxCoeff();
  out.value = net.price.dot(out.reservation);
  return out;
}

OptimalityReport verify_optimality(const Instance& inst, const Mat& F, const Mat& Pi,
                                   double tol) {
  const Network& net = inst.network;
  const int m = net.edge_count();
  const int K = inst.scenarios.count();
  if (F.rows() != m || F.cols() != K || Pi.rows() != m || Pi.cols() != K) {
    throw std::invalid_argument("verify_optimality: dimension mismatch");
  }
  OptimalityReport rep;
  const double p_scale = std::max(1.0, net.price.lpNorm<Eigen::Infinity>());

  // Condition 1: valid scenario prices.
  const double neg = std::max(0.0, -Pi.minCoeff());
  const double row_sum_err =
      (Pi.rowwise().sum() - net.price).lpNorm<Eigen::Infinity>();
  rep.worst_price_violation = std::max(neg, row_sum_err);
  rep.prices_valid = rep.worst_price_violation <= tol * p_scale;

  // Condition 2: the price-decomposition inequality is tight.
  const Vec r = F.rowwise().maxCoeff();
  const double lhs = net.price.dot(r);
  const double rhs = Pi.cwiseProduct(F).sum();
  rep.worst_tightness_violation = std::abs(lhs - rhs);
  rep.tight = rep.worst_tightness_violation <= tol * (1.0 + std::abs(lhs));

  // Condition 3: each column optimal for its scenario prices.
  double worst = 0.0;
  for (int k = 0; k < K; ++k) {
    const Vec pi_k = Pi.col(k).cwiseMax(0.0);
    FlowSolution s = min_cost_flow(net, inst.scenarios.source(k), pi_k);
    const double primal_at_F = pi_k.dot(F.col(k));
    worst = std::max(worst, primal_at_F - s.dual_objective);
  }
  rep.worst_flow_suboptimality = worst;
  rep.flows_optimal = worst <= tol * (1.0 + std::abs(lhs));

  // Complementarity, implied by condition 2.
  double comp = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < K; ++k) {
      comp = std::max(comp, std::abs(Pi(j, k) * (F(j, k) - r[j])));
    }
  }
  rep.worst_complementarity_violation = comp;
  rep.complementary = comp <= tol * (1.0 + std::abs(lhs));
  return rep;
}

ExtendedFlow extend_policy(const Instance& inst, const Mat& F, const Vec& query_source) {
  const int n = inst.network.node_count;
  const int K = inst.scenarios.count();
  if (query_source.size() != n) {
    throw std::invalid_argument("extend_policy: source dimension mismatch");
  }
  if (F.rows() != inst.network.edge_count() || F.cols() != K) {
    throw std::invalid_argument("extend_policy: flow matrix dimension mismatch");
  }
  // Least-norm barycentric weights: project the origin onto
  // {theta : S theta = s, 1^T theta = 1} intersected with the
  // nonnegative orthant, by Dykstra's alternating projections.
  Mat M(n + 1, K);
  M.topRows(n) = inst.scenarios.sources;
  M.bottomRows(1).setOnes();
  Vec b(n + 1);
  b.head(n) = query_source;
  b[n] = 1.0;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(M);

  Vec x = Vec::Zero(K), p_corr = Vec::Zero(K), q_corr = Vec::Zero(K);
  const int max_iters = 200000;
  for (int it = 0; it < max_iters; ++it) {
    const Vec v = x + p_corr;
    const Vec y = v - cod.solve(M * v - b);
    p_corr = v - y;
    const Vec z = y + q_corr;
    const Vec x_new = z.cwiseMax(0.0);
    q_corr = z - x_new;
    const double change = (x_new - x).lpNorm<Eigen::Infinity>();
    x = x_new;
    if (it > 10 && change <= 1e-13) break;
  }

  const double s_scale = query_source.lpNorm<Eigen::Infinity>();
  const double hull_tol = 1e-7 * (1.0 + s_scale);
  const Vec theta = x.cwiseMax(0.0);
  const double res_s = (inst.scenarios.sources * theta - query_source).lpNorm<Eigen::Infinity>();
  const double res_sum = std::abs(theta.sum() - 1.0);
  if (res_s > hull_tol || res_sum > hull_tol) {
    throw std::runtime_error(
        "extend_policy: query source is outside the convex hull of the scenarios");
  }
  ExtendedFlow out;
  out.weights = theta;
  out.flow = F * theta;
  out.hull_residual = res_s;
  return out;
}

}  // namespace capres
