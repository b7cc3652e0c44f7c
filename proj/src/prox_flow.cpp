#include "capres/prox_flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace capres {

KktCache::KktCache(const Network& net) {
  const int n = net.node_count;
  if (n < 2) throw std::invalid_argument("KktCache: need at least two nodes");
  if (!is_connected(net)) {
    throw std::invalid_argument("KktCache: network is not connected");
  }
  n_ = n;
  fingerprint_ = fingerprint(net);
  // Grounded Laplacian A A^T with the last node removed; full rank on
  // a connected graph.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(4 * net.edge_count());
  for (const Edge& e : net.edges) {
    const int t = e.tail;
    const int h = e.head;
    if (t < n - 1) trips.emplace_back(t, t, 1.0);
    if (h < n - 1) trips.emplace_back(h, h, 1.0);
    if (t < n - 1 && h < n - 1) {
      trips.emplace_back(t, h, -1.0);
      trips.emplace_back(h, t, -1.0);
    }
  }
  Eigen::SparseMatrix<double> L(n - 1, n - 1);
  L.setFromTriplets(trips.begin(), trips.end());
  laplacian_.compute(L);
  if (laplacian_.info() != Eigen::Success) {
    throw std::runtime_error("KktCache: Laplacian factorization failed");
  }
}

void KktCache::check(const Network& net) const {
  if (fingerprint(net) != fingerprint_) {
    throw std::invalid_argument("KktCache: cache was built for a different network");
  }
}

void KktCache::project_conservation(const Network& net, const Vec& v, const Vec& s,
                                    Vec& f, Vec& lambda) const {
  const Vec rhs = net.apply_incidence(v) + s;
  lambda = Vec::Zero(n_);
  lambda.head(n_ - 1) = laplacian_.solve(rhs.head(n_ - 1));
  f = v - net.apply_incidence_transpose(lambda);
}

FlowSolution prox_flow(const Network& net, const Vec& source, const Vec& prices,
                       const Vec& anchor, double rho, const KktCache& cache,
                       double tol, ProxFlowWorkspace* workspace) {
  const int m = net.edge_count();
  if (rho <= 0) throw std::invalid_argument("prox_flow: rho must be positive");
  cache.check(net);

  const Vec& c = net.capacity;
  const Vec g = anchor - prices / rho;
  const double relax = 1.7;

  Vec w, u;
  if (workspace != nullptr && workspace->warm && workspace->w.size() == m) {
    w = workspace->w;
    u = workspace->u;
  } else {
    w = g.cwiseMax(0.0).cwiseMin(c);
    u = Vec::Zero(m);
  }

  const int max_iters = 10 * m + 2000;
  FlowSolution sol;
  sol.status = FlowStatus::kIterationLimit;
  Vec f(m), lambda, ghat(m), fhat(m), t(m);
  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    ghat = 0.5 * (g + w - u);
    cache.project_conservation(net, ghat, source, f, lambda);
    // Projected KKT residual at the current equality-feasible iterate,
    // with multiplier y = 2*rho*lambda: the box projection of
    // f - grad/rho reduces to clamp(2f - w + u).
    t = (2.0 * f - w + u).cwiseMax(0.0).cwiseMin(c);
    residual = (f - t).lpNorm<Eigen::Infinity>();
    if (residual <= tol) {
      sol.status = FlowStatus::kOptimal;
      ++iter;
      break;
    }
    fhat = relax * f + (1.0 - relax) * w;
    w = (fhat + u).cwiseMax(0.0).cwiseMin(c);
    u += fhat - w;
  }

  if (workspace != nullptr) {
    workspace->w = w;
    workspace->u = u;
    workspace->warm = true;
  }

  sol.iterations = iter;
  sol.kkt_residual = residual;
  sol.flow = f.cwiseMax(0.0).cwiseMin(c);
  sol.potentials = 2.0 * rho * lambda;
  sol.reduced_costs = rho * u;  // box multipliers
  sol.conservation_residual =
      (net.apply_incidence(sol.flow) + source).lpNorm<Eigen::Infinity>();
  sol.objective = prices.dot(sol.flow) + 0.5 * rho * (sol.flow - anchor).squaredNorm();
  sol.dual_objective = sol.objective;  // not a linear-programming certificate
  return sol;
}

}  // namespace capres
