#include "capres/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace capres {

namespace {

enum ArcState : signed char { kLower = 0, kUpper = 1, kBasic = 2 };

struct SimplexWorkspace {
  int n = 0;
  int narcs = 0;
  std::vector<int> tail, head;
  std::vector<double> cost, cap, flow;
  std::vector<ArcState> state;
  // spanning-tree bookkeeping, rebuilt after every pivot
  std::vector<int> parent, parent_arc, depth;
  std::vector<double> y;
  std::vector<std::vector<int>> node_arcs;  // basic arcs incident to each node

  void rebuild_tree() {
    for (auto& v : node_arcs) v.clear();
    for (int a = 0; a < narcs; ++a) {
      if (state[a] == kBasic) {
        node_arcs[tail[a]].push_back(a);
        node_arcs[head[a]].push_back(a);
      }
    }
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    parent[0] = 0;
    depth[0] = 0;
    y[0] = 0.0;
    std::queue<int> q;
    q.push(0);
    int visited = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : node_arcs[v]) {
        int w = (tail[a] == v) ? head[a] : tail[a];
        if (parent[w] >= 0) continue;
        parent[w] = v;
        parent_arc[w] = a;
        depth[w] = depth[v] + 1;
        // zero reduced cost on basic arcs: cost + y[tail] - y[head] = 0
        y[w] = (tail[a] == v) ? y[v] + cost[a] : y[v] - cost[a];
        q.push(w);
        ++visited;
      }
    }
    if (visited != n) {
      throw std::logic_error("network simplex: basis does not span the node set");
    }
  }

  double reduced_cost(int a) const { return cost[a] + y[tail[a]] - y[head[a]]; }
};

}  // namespace

FlowSolution min_cost_flow(const Network& net, const Vec& source, const Vec& prices,
                           double tol) {
  const int n = net.node_count;
  const int m = net.edge_count();
  if (source.size() != n) throw std::invalid_argument("min_cost_flow: source size mismatch");
  if (prices.size() != m) throw std::invalid_argument("min_cost_flow: price size mismatch");
  const double s_scale = std::max(1.0, source.lpNorm<Eigen::Infinity>());
  if (std::abs(source.sum()) > 1e-9 * s_scale) {
    throw std::invalid_argument("min_cost_flow: source does not sum to zero");
  }

  SimplexWorkspace w;
  w.n = n;
  w.narcs = m + (n - 1);
  w.tail.resize(w.narcs);
  w.head.resize(w.narcs);
  w.cost.resize(w.narcs);
  w.cap.resize(w.narcs);
  w.flow.assign(w.narcs, 0.0);
  w.state.assign(w.narcs, kLower);
  w.parent.resize(n);
  w.parent_arc.resize(n);
  w.depth.resize(n);
  w.y.resize(n);
  w.node_arcs.resize(n);

  const double max_price = (m > 0) ? prices.lpNorm<Eigen::Infinity>() : 0.0;
  const double artificial_price = max_price * m + 1.0;
  const double big_cap = source.cwiseAbs().sum() + 1.0;

  for (int j = 0; j < m; ++j) {
    w.tail[j] = net.edges[j].tail;
    w.head[j] = net.edges[j].head;
    w.cost[j] = prices[j];
    w.cap[j] = net.capacity[j];
  }
  // Artificial arcs between each non-root node and the root, oriented
  // so the initial tree flow is the node imbalance.
  for (int i = 1; i < n; ++i) {
    const int a = m + (i - 1);
    const double b = source[i];  // required outflow - inflow at node i
    if (b >= 0) {
      w.tail[a] = i;
      w.head[a] = 0;
      w.flow[a] = b;
    } else {
      w.tail[a] = 0;
      w.head[a] = i;
      w.flow[a] = -b;
    }
    w.cost[a] = artificial_price;
    w.cap[a] = big_cap;
    w.state[a] = kBasic;
  }

  const double pivot_tol = 1e-11 * std::max(1.0, max_price);
  const long max_pivots = 20000L + 200L * w.narcs;

  FlowSolution sol;
  sol.status = FlowStatus::kOptimal;

  w.rebuild_tree();
  long pivots = 0;
  std::vector<std::pair<int, int>> cycle;  // (arc, traversal sign)
  for (;; ++pivots) {
    if (pivots >= max_pivots) {
      sol.status = FlowStatus::kIterationLimit;
      break;
    }
    int entering = -1;
    for (int a = 0; a < w.narcs; ++a) {
      if (w.state[a] == kBasic) continue;
      const double rc = w.reduced_cost(a);
      if ((w.state[a] == kLower && rc < -pivot_tol) ||
          (w.state[a] == kUpper && rc > pivot_tol)) {
        entering = a;  // Bland: first eligible index
        break;
      }
    }
    if (entering < 0) break;

    const int dir = (w.state[entering] == kLower) ? +1 : -1;
    // Cycle: the entering arc plus the tree path from its head back to
    // its tail. Traversal signs are relative to the direction of flow
    // around that cycle.
    cycle.clear();
    int u = w.head[entering];
    int v = w.tail[entering];
    while (w.depth[u] > w.depth[v]) {
      const int a = w.parent_arc[u];
      cycle.emplace_back(a, (w.tail[a] == u) ? +1 : -1);
      u = w.parent[u];
    }
    while (w.depth[v] > w.depth[u]) {
      const int a = w.parent_arc[v];
      cycle.emplace_back(a, (w.head[a] == v) ? +1 : -1);
      v = w.parent[v];
    }
    while (u != v) {
      const int au = w.parent_arc[u];
      cycle.emplace_back(au, (w.tail[au] == u) ? +1 : -1);
      u = w.parent[u];
      const int av = w.parent_arc[v];
      cycle.emplace_back(av, (w.head[av] == v) ? +1 : -1);
      v = w.parent[v];
    }

    // Ratio test; ties broken by smallest arc index (Bland).
    double theta = (dir > 0) ? w.cap[entering] - w.flow[entering] : w.flow[entering];
    for (const auto& [a, sign] : cycle) {
      const int delta = sign * dir;
      const double slack = (delta > 0) ? w.cap[a] - w.flow[a] : w.flow[a];
      theta = std::min(theta, slack);
    }
    theta = std::max(theta, 0.0);
    const double entering_slack =
        (dir > 0) ? w.cap[entering] - w.flow[entering] : w.flow[entering];
    int leaving = (entering_slack <= theta) ? entering : -1;
    int leaving_delta = dir;
    for (const auto& [a, sign] : cycle) {
      const int delta = sign * dir;
      const double slack = (delta > 0) ? w.cap[a] - w.flow[a] : w.flow[a];
      if (slack <= theta && (leaving < 0 || a < leaving)) {
        leaving = a;
        leaving_delta = delta;
      }
    }

    w.flow[entering] += dir * theta;
    for (const auto& [a, sign] : cycle) {
      w.flow[a] += sign * dir * theta;
    }
    if (leaving == entering) {
      // bound-to-bound move
      w.state[entering] = (dir > 0) ? kUpper : kLower;
      w.flow[entering] = (dir > 0) ? w.cap[entering] : 0.0;
    } else {
      w.state[entering] = kBasic;
      w.state[leaving] = (leaving_delta > 0) ? kUpper : kLower;
      w.flow[leaving] = (leaving_delta > 0) ? w.cap[leaving] : 0.0;
      w.rebuild_tree();
    }
  }

  sol.iterations = static_cast<int>(pivots);
  sol.flow.resize(m);
  for (int j = 0; j < m; ++j) {
    sol.flow[j] = std::clamp(w.flow[j], 0.0, net.capacity[j]);
  }
  sol.potentials.resize(n);
  for (int i = 0; i < n; ++i) sol.potentials[i] = w.y[i];
  sol.reduced_costs.resize(m);
  for (int j = 0; j < m; ++j) sol.reduced_costs[j] = w.reduced_cost(j);

  double artificial_flow = 0.0;
  for (int a = m; a < w.narcs; ++a) artificial_flow = std::max(artificial_flow, w.flow[a]);
  if (sol.status == FlowStatus::kOptimal && artificial_flow > tol * s_scale + 1e-12) {
    sol.status = FlowStatus::kInfeasible;
  }
  sol.conservation_residual =
      (net.apply_incidence(sol.flow) + source).lpNorm<Eigen::Infinity>();
  sol.objective = prices.dot(sol.flow);
  // Dual of the real-arc LP evaluated at the final potentials; valid
  // for any potentials, tight at optimality.
  double dual = -source.dot(sol.potentials);
  for (int j = 0; j < m; ++j) {
    dual -= net.capacity[j] * std::max(0.0, -sol.reduced_costs[j]);
  }
  sol.dual_objective = dual;
  return sol;
}

FeasibilityReport check_feasibility(const Instance& inst, double tol) {
  FeasibilityReport rep;
  const int K = inst.scenarios.count();
  const Vec zero_prices = Vec::Zero(inst.network.edge_count());
  rep.feasible.resize(K);
  rep.residual.resize(K);
  for (int k = 0; k < K; ++k) {
    FlowSolution s = min_cost_flow(inst.network, inst.scenarios.source(k), zero_prices, tol);
    const double res = s.conservation_residual;
    const bool ok = (s.status == FlowStatus::kOptimal) &&
                    res <= tol * std::max(1.0, inst.scenarios.source(k).lpNorm<Eigen::Infinity>());
    rep.feasible[k] = ok;
    rep.residual[k] = res;
    if (!ok) rep.all_feasible = false;
  }
  return rep;
}

}  // namespace capres
