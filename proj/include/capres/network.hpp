#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace capres {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A directed edge, identified by 0-based endpoint node ids.
struct Edge {
  int tail = 0;
  int head = 0;
};

// Directed network with per-edge capacities and reservation prices.
// The incidence matrix A (n x m) has +1 at an edge's head and -1 at its
// tail; it is never materialized, only applied.
struct Network {
  int node_count = 0;
  std::vector<Edge> edges;
  Vec capacity;  // m, >= 0
  Vec price;     // m, >= 0

  int edge_count() const { return static_cast<int>(edges.size()); }

  // y = A f: net inflow at each node.
  Vec apply_incidence(const Vec& flow) const;
  // g = A^T y: per edge, y[head] - y[tail].
  Vec apply_incidence_transpose(const Vec& potentials) const;
};

// K scenario source vectors, stored as the columns of an n x K matrix.
// Positive entries inject flow, negative entries withdraw it; each
// column sums to zero.
struct ScenarioSet {
  Mat sources;  // n x K

  int count() const { return static_cast<int>(sources.cols()); }
  Vec source(int k) const { return sources.col(k); }
};

// Full problem data: the network plus the scenario set.
struct Instance {
  Network network;
  ScenarioSet scenarios;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the structural invariants: endpoint validity, no self-loops,
// nonnegative capacities and prices, connectivity of the underlying
// undirected graph, and (for instances) dimension agreement and
// zero-sum scenario columns. Reports every violation found.
ValidationReport validate(const Network& net);
ValidationReport validate(const Instance& inst);

bool is_connected(const Network& net);

// Replaces a capacitated node by an in-node/out-node pair joined by a
// zero-price edge of the given capacity. In-edges are redirected to the
// original node id; out-edges leave the new node (id = old node_count).
// Original edge order is preserved; the bridging edge is appended.
Network split_capacitated_node(const Network& net, int node, double node_capacity);

// FNV-1a hash of the canonical serialization; used to key caches and
// to match result files to the instance they came from.
std::uint64_t fingerprint(const Network& net);
std::uint64_t fingerprint(const Instance& inst);

}  // namespace capres
