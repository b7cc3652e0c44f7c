#pragma once

#include "capres/network.hpp"

namespace capres {

struct ProxMaxResult {
  Vec x;                // length K, x_i = min(t, u_i)
  double t = 0.0;       // implied reservation level
  int active_count = 0; // entries clipped to t
};

// Unique minimizer of  beta*t + (1/2)||x - u||^2  s.t.  x_i <= t.
// Sort u descending, scan cumulative sums until the k-th partial sum
// satisfies u_(k+1) <= (sum_k - beta)/k, then t = (sum_k - beta)/k.
// O(K log K).
ProxMaxResult prox_weighted_max(const Vec& u, double beta);

// Reservation update: row j of the result is the prox of the weighted
// row max applied to u_j = alpha*f_j + (1-alpha)*ftilde_j + pi_j/rho
// with weight p_j/rho. Rows are independent.
Mat reservation_update(const Mat& F_new, const Mat& F_tilde, const Mat& Pi,
                       const Vec& p, double rho, double alpha);

}  // namespace capres
