#pragma once

#include "capres/network.hpp"
#include "capres/network_simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>

namespace capres {

// Factorization of the grounded graph Laplacian A A^T, shared across
// all scenarios and iterations (A is constant per network). Used to
// project onto the conservation subspace {f : A f + s = 0}.
class KktCache {
 public:
  explicit KktCache(const Network& net);

  // Projects v onto {f : A f + s = 0}; also returns the multiplier
  // lambda with f = v - A^T lambda (lambda grounded at the last node).
  void project_conservation(const Network& net, const Vec& v, const Vec& s,
                            Vec& f, Vec& lambda) const;

  std::uint64_t network_fingerprint() const { return fingerprint_; }
  void check(const Network& net) const;

 private:
  std::uint64_t fingerprint_ = 0;
  int n_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> laplacian_;
};

// Reusable inner state; passing the same workspace across calls on a
// slowly moving anchor warm-starts the splitting iteration.
struct ProxFlowWorkspace {
  Vec w, u;
  bool warm = false;
};

// Unique minimizer of  pi^T f + (rho/2) ||f - anchor||^2
// s.t. A f + s = 0, 0 <= f <= c.
//
// Solved as the Euclidean projection of anchor - pi/rho onto the
// intersection of the conservation subspace and the capacity box, by
// operator splitting with over-relaxation: alternate the cached
// equality projection with the box projection until the projected KKT
// residual drops below tol. The returned flow is clamped to [0, c];
// the conservation residual after clamping is reported, not repaired.
FlowSolution prox_flow(const Network& net, const Vec& source, const Vec& prices,
                       const Vec& anchor, double rho, const KktCache& cache,
                       double tol = 1e-8, ProxFlowWorkspace* workspace = nullptr);

}  // namespace capres
