#include "capres/prox_max.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace capres {

ProxMaxResult prox_weighted_max(const Vec& u, double beta) {
  const int K = static_cast<int>(u.size());
  if (K < 1) throw std::invalid_argument("prox_weighted_max: empty input");
  if (beta < 0) throw std::invalid_argument("prox_weighted_max: beta must be nonnegative");

  ProxMaxResult res;
  if (beta == 0.0) {
    res.x = u;
    res.t = u.maxCoeff();
    res.active_count = 0;
    for (int i = 0; i < K; ++i) {
      if (u[i] == res.t) ++res.active_count;
    }
    return res;
  }

  // Stable descending sort of indices; ties keep original order.
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&u](int a, int b) { return u[a] > u[b]; });

  double partial = 0.0;
  double t = 0.0;
  int k = K;
  for (int i = 0; i < K; ++i) {
    partial += u[order[i]];
    t = (partial - beta) / (i + 1);
    if (i + 1 == K || u[order[i + 1]] <= t) {
      k = i + 1;
      break;
    }
  }
  res.t = t;
  res.active_count = k;
  res.x = u.cwiseMin(t);
  return res;
}

Mat reservation_update(const Mat& F_new, const Mat& F_tilde, const Mat& Pi,
                       const Vec& p, double rho, double alpha) {
  const int m = static_cast<int>(F_new.rows());
  const int K = static_cast<int>(F_new.cols());
  if (F_tilde.rows() != m || F_tilde.cols() != K || Pi.rows() != m || Pi.cols() != K ||
      p.size() != m) {
    throw std::invalid_argument("reservation_update: dimension mismatch");
  }
  if (rho <= 0) throw std::invalid_argument("reservation_update: rho must be positive");
  if (alpha <= 0 || alpha >= 2) {
    throw std::invalid_argument("reservation_update: alpha must lie in (0,2)");
  }
  Mat out(m, K);
  for (int j = 0; j < m; ++j) {
    const Vec u =
        (alpha * F_new.row(j) + (1.0 - alpha) * F_tilde.row(j) + Pi.row(j) / rho)
            .transpose();
    out.row(j) = prox_weighted_max(u, p[j] / rho).x.transpose();
  }
  return out;
}

}  // namespace capres
