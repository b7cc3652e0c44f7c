#include "capres/generators.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

namespace capres {

Instance generate_layered(int a, double eps) {
  if (a < 1) throw std::invalid_argument("generate_layered: a must be >= 1");
  if (eps <= 0) throw std::invalid_argument("generate_layered: eps must be positive");
  Network net;
  net.node_count = 2 * a + 1;
  const int sink = 2 * a;  // node 2a+1 in 1-based terms
  // Layer 1 (nodes 0..a-1) to layer 2 (nodes a..2a-1).
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < a; ++j) {
      net.edges.push_back(Edge{i, a + j});
    }
  }
  // Layer 2 to sink.
  for (int j = 0; j < a; ++j) {
    net.edges.push_back(Edge{a + j, sink});
  }
  const int m = net.edge_count();
  net.capacity = Vec::Ones(m);
  net.price.resize(m);
  int idx = 0;
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < a; ++j) {
      net.price[idx++] = (i == j) ? eps : 2 * eps;
    }
  }
  for (int j = 0; j < a; ++j) net.price[idx++] = 1.0;

  Mat S = Mat::Zero(net.node_count, a);
  for (int k = 0; k < a; ++k) {
    S(k, k) = 1.0;
    S(sink, k) = -1.0;
  }
  return Instance{std::move(net), ScenarioSet{std::move(S)}};
}

namespace {

// Uniform double in [0,1) from the top 53 bits; stable across library
// implementations, unlike std::uniform_real_distribution.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int next_index(std::mt19937_64& rng, int bound) {
  // rejection sampling, bound is tiny relative to 2^64
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % static_cast<std::uint64_t>(bound));
}

}  // namespace

RandomInstance generate_random_with_flows(int n, int m, int K, SourceStyle style,
                                          std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_random: n must be >= 2");
  if (m < n - 1) throw std::invalid_argument("generate_random: need m >= n-1 for connectivity");
  if (K < 1) throw std::invalid_argument("generate_random: K must be >= 1");
  const long max_edges = static_cast<long>(n) * (n - 1);  // both directions, no self-loops
  if (m > max_edges) throw std::invalid_argument("generate_random: m exceeds simple-digraph limit");

  std::mt19937_64 rng(seed);
  Network net;
  net.node_count = n;

  // Random spanning tree: attach each new node to a uniformly chosen
  // earlier one, with random edge orientation.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[next_index(rng, i + 1)]);
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < n; ++i) {
    int u = order[next_index(rng, i)];
    int v = order[i];
    if (rng() & 1ull) std::swap(u, v);
    net.edges.push_back(Edge{u, v});
    used.insert({u, v});
  }
  long attempts = 0;
  const long attempt_cap = 1000L * m + 100000L;
  while (net.edge_count() < m) {
    if (++attempts > attempt_cap) {
      throw std::runtime_error("generate_random: could not place distinct extra edges");
    }
    int u = next_index(rng, n);
    int v = next_index(rng, n);
    if (u == v) continue;
    if (used.count({u, v})) continue;
    net.edges.push_back(Edge{u, v});
    used.insert({u, v});
  }

  net.capacity = Vec::Ones(m);
  net.price.resize(m);
  if (style == SourceStyle::kContinuous) {
    for (int j = 0; j < m; ++j) net.price[j] = next_unit(rng);
  } else {
    net.price.setOnes();
  }

  Mat z(m, K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < m; ++j) {
      if (style == SourceStyle::kContinuous) {
        z(j, k) = next_unit(rng);
      } else {
        z(j, k) = next_index(rng, 4) / 3.0;
      }
    }
  }
  Mat S(n, K);
  for (int k = 0; k < K; ++k) {
    S.col(k) = -net.apply_incidence(z.col(k));
  }
  RandomInstance out;
  out.instance = Instance{std::move(net), ScenarioSet{std::move(S)}};
  out.z = std::move(z);
  return out;
}

Instance generate_random(int n, int m, int K, SourceStyle style, std::uint64_t seed) {
  return generate_random_with_flows(n, m, K, style, seed).instance;
}

}  // namespace capres
