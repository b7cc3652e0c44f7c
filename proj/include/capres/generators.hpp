#pragma once

#include "capres/network.hpp"

#include <cstdint>

namespace capres {

enum class SourceStyle {
  kContinuous,  // z entries uniform on [0,1], prices uniform on [0,1]
  kDiscrete,    // z entries from {0, 1/3, 2/3, 1}, prices all one
};

// Three-layer worst-case family: layers of a, a, 1 nodes. Every
// layer-1 node connects to every layer-2 node (price eps when aligned,
// 2*eps otherwise), every layer-2 node connects to the sink (price 1).
// Scenario k injects one unit at node k and withdraws it at the sink.
// All capacities are one.
Instance generate_layered(int a, double eps);

// Random connected instance: a spanning tree plus m-n+1 extra distinct
// edges, unit capacities, and sources s^(k) = -A z^(k) so every
// scenario is feasible by construction. Deterministic in the seed.
Instance generate_random(int n, int m, int K, SourceStyle style, std::uint64_t seed);

// The z matrix used to build the sources of the last construction is
// recoverable for testing: same RNG stream, same instance.
struct RandomInstance {
  Instance instance;
  Mat z;  // m x K, the feasible flows the sources were derived from
};
RandomInstance generate_random_with_flows(int n, int m, int K, SourceStyle style,
                                          std::uint64_t seed);

}  // namespace capres
