#include "capres/network.hpp"

#include <queue>
#include <sstream>

namespace capres {

Vec Network::apply_incidence(const Vec& flow) const {
  Vec out = Vec::Zero(node_count);
  for (int j = 0; j < edge_count(); ++j) {
    out[edges[j].head] += flow[j];
    out[edges[j].tail] -= flow[j];
  }
  return out;
}

Vec Network::apply_incidence_transpose(const Vec& potentials) const {
  Vec out(edge_count());
  for (int j = 0; j < edge_count(); ++j) {
    out[j] = potentials[edges[j].head] - potentials[edges[j].tail];
  }
  return out;
}

bool is_connected(const Network& net) {
  const int n = net.node_count;
  if (n <= 0) return false;
  if (n == 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : net.edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) continue;
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        q.push(w);
      }
    }
  }
  return visited == n;
}

ValidationReport validate(const Network& net) {
  ValidationReport rep;
  auto add = [&rep](const std::string& msg) { rep.violations.push_back(msg); };
  const int n = net.node_count;
  const int m = net.edge_count();
  if (n <= 0) add("node count must be positive");
  if (net.capacity.size() != m) add("capacity vector length does not match edge count");
  if (net.price.size() != m) add("price vector length does not match edge count");
  for (int j = 0; j < m; ++j) {
    const Edge& e = net.edges[j];
    std::ostringstream os;
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
      os << "edge " << j << " has endpoint outside [0," << n - 1 << "]";
      add(os.str());
    } else if (e.tail == e.head) {
      os << "edge " << j << " is a self-loop at node " << e.tail;
      add(os.str());
    }
  }
  for (int j = 0; j < std::min<int>(m, net.capacity.size()); ++j) {
    if (net.capacity[j] < 0) {
      std::ostringstream os;
      os << "capacity of edge " << j << " is negative";
      add(os.str());
    }
  }
  for (int j = 0; j < std::min<int>(m, net.price.size()); ++j) {
    if (net.price[j] < 0) {
      std::ostringstream os;
      os << "price of edge " << j << " is negative";
      add(os.str());
    }
  }
  if (n > 0 && !is_connected(net)) add("graph not connected");
  return rep;
}

ValidationReport validate(const Instance& inst) {
  ValidationReport rep = validate(inst.network);
  const Mat& S = inst.scenarios.sources;
  if (S.cols() < 1) rep.violations.push_back("scenario set is empty");
  if (S.rows() != inst.network.node_count) {
    rep.violations.push_back("scenario node dimension does not match network");
    return rep;
  }
  for (int k = 0; k < S.cols(); ++k) {
    const double tol = 1e-9 * std::max(1.0, S.col(k).lpNorm<Eigen::Infinity>());
    if (std::abs(S.col(k).sum()) > tol) {
      std::ostringstream os;
      os << "source column " << k + 1 << " does not sum to zero";
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

Network split_capacitated_node(const Network& net, int node, double node_capacity) {
  if (node < 0 || node >= net.node_count) {
    throw std::invalid_argument("split_capacitated_node: invalid node id");
  }
  if (node_capacity < 0) {
    throw std::invalid_argument("split_capacitated_node: negative node capacity");
  }
  Network out;
  out.node_count = net.node_count + 1;
  const int in_node = node;               // keeps incoming edges
  const int out_node = net.node_count;    // new node, takes outgoing edges
  out.edges = net.edges;
  for (Edge& e : out.edges) {
    if (e.tail == node) e.tail = out_node;
  }
  const int m = net.edge_count();
  out.capacity.resize(m + 1);
  out.price.resize(m + 1);
  out.capacity.head(m) = net.capacity;
  out.price.head(m) = net.price;
  out.edges.push_back(Edge{in_node, out_node});
  out.capacity[m] = node_capacity;
  out.price[m] = 0.0;
  return out;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

template <typename T>
void fnv_value(std::uint64_t& h, const T& v) {
  fnv_bytes(h, &v, sizeof(v));
}

void fnv_network(std::uint64_t& h, const Network& net) {
  fnv_value(h, net.node_count);
  for (const Edge& e : net.edges) {
    fnv_value(h, e.tail);
    fnv_value(h, e.head);
  }
  for (int j = 0; j < net.capacity.size(); ++j) fnv_value(h, net.capacity[j]);
  for (int j = 0; j < net.price.size(); ++j) fnv_value(h, net.price[j]);
}

}  // namespace

std::uint64_t fingerprint(const Network& net) {
  std::uint64_t h = kFnvOffset;
  fnv_network(h, net);
  return h;
}

std::uint64_t fingerprint(const Instance& inst) {
  std::uint64_t h = kFnvOffset;
  fnv_network(h, inst.network);
  const Mat& S = inst.scenarios.sources;
  for (int k = 0; k < S.cols(); ++k) {
    for (int i = 0; i < S.rows(); ++i) fnv_value(h, S(i, k));
  }
  return h;
}

}  // namespace capres
