#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "capres/bounds.hpp"
#include "capres/generators.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace capres;
using testhelp::single_edge_instance;
using testhelp::unit;

namespace {

Instance relaxed_capacities(Instance inst, double cap) {
  inst.network.capacity.setConstant(cap);
  return inst;
}

}  // namespace

TEST_CASE("layered a=3 heuristic value is K(eps+1)") {
  Instance inst = generate_layered(3, 0.01);
  HeuristicResult h = heuristic_policy(inst);
  CHECK(h.objective == doctest::Approx(3 * 1.01).epsilon(1e-9));
  for (int k = 0; k < 3; ++k) {
    CHECK(h.scenario_costs[k] == doctest::Approx(1.01).epsilon(1e-9));
  }
  CHECK(h.lower_uniform == doctest::Approx(1.01).epsilon(1e-9));
  CHECK(h.lower_certified <= h.lower_uniform + 1e-9);
}

TEST_CASE("single scenario: heuristic is optimal") {
  Instance inst = generate_layered(1, 0.25);
  HeuristicResult h = heuristic_policy(inst);
  CHECK(h.objective == doctest::Approx(1.25).epsilon(1e-10));
  testoracle::CrOracle ref = testoracle::solve_cr(inst);
  REQUIRE(ref.feasible);
  CHECK(ref.objective == doctest::Approx(1.25).epsilon(1e-8));
  CHECK(h.lower_certified == doctest::Approx(1.25).epsilon(1e-7));
}

TEST_CASE("heuristic throws on infeasible scenarios") {
  Instance inst = single_edge_instance(0.5);
  CHECK_THROWS(heuristic_policy(inst));
}

TEST_CASE("sandwich bound against the exact optimum") {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 8; ++trial) {
    Instance inst = generate_random(5, 8, 3, SourceStyle::kContinuous, rng());
    testoracle::CrOracle ref = testoracle::solve_cr(inst);
    REQUIRE(ref.feasible);
    HeuristicResult h = heuristic_policy(inst);
    CHECK(h.objective >= ref.objective - 1e-7);
    CHECK(h.objective / 3.0 <= ref.objective + 1e-7);
    CHECK(h.lower_uniform <= ref.objective + 1e-7);
    CHECK(h.lower_certified <= ref.objective + 1e-7);
  }
}

TEST_CASE("uniform scenario prices reproduce the uniform lower bound") {
  Instance inst = generate_layered(2, 0.1);
  HeuristicResult h = heuristic_policy(inst);
  const int K = inst.scenarios.count();
  Mat Pi = (inst.network.price / K).replicate(1, K);
  CHECK(lower_bound(inst, Pi) == doctest::Approx(h.lower_certified).epsilon(1e-9));
}

TEST_CASE("all price mass on one scenario") {
  Instance inst = generate_layered(2, 0.1);
  const int K = inst.scenarios.count();
  Mat Pi = Mat::Zero(inst.network.edge_count(), K);
  Pi.col(0) = inst.network.price;
  const double L = lower_bound(inst, Pi);
  // scenario 0 pays full freight, scenario 1 flows free: L = J for k=0
  FlowSolution s0 = min_cost_flow(inst.network, inst.scenarios.source(0),
                                  inst.network.price);
  CHECK(L == doctest::Approx(s0.objective).epsilon(1e-8));
}

TEST_CASE("lower_bound rejects invalid price matrices") {
  Instance inst = generate_layered(2, 0.1);
  const int K = 2, m = inst.network.edge_count();
  Mat Pi = (inst.network.price / K).replicate(1, K);
  Mat bad_sign = Pi;
  bad_sign(0, 0) = -0.01;
  bad_sign(0, 1) = inst.network.price[0] + 0.01;
  CHECK_THROWS_AS(lower_bound(inst, bad_sign), std::invalid_argument);
  Mat bad_sum = Pi;
  bad_sum(1, 0) += 0.05;
  CHECK_THROWS_AS(lower_bound(inst, bad_sum), std::invalid_argument);
  CHECK_THROWS(lower_bound(inst, Mat::Zero(m, K + 1)));
}

TEST_CASE("every valid price split lower-bounds the optimum") {
  std::mt19937_64 rng(515);
  Instance inst = generate_random(5, 8, 3, SourceStyle::kContinuous, rng());
  testoracle::CrOracle ref = testoracle::solve_cr(inst);
  REQUIRE(ref.feasible);
  const int m = inst.network.edge_count(), K = 3;
  for (int trial = 0; trial < 10; ++trial) {
    Mat Pi(m, K);
    for (int j = 0; j < m; ++j) {
      Vec w(K);
      for (int k = 0; k < K; ++k) w[k] = unit(rng) + 1e-3;
      Pi.row(j) = (inst.network.price[j] / w.sum()) * w.transpose();
    }
    CHECK(lower_bound(inst, Pi) <= ref.objective + 1e-7);
  }
}

TEST_CASE("upper_bound prices the row max") {
  Instance inst = generate_layered(3, 0.01);
  HeuristicResult h = heuristic_policy(inst);
  UpperBoundResult ub = upper_bound(inst, h.flows);
  CHECK(ub.value == doctest::Approx(h.objective).epsilon(1e-12));
  CHECK(ub.reservation.size() == inst.network.edge_count());
  // single shared route: one column alone prices at eps+1
  UpperBoundResult one = upper_bound(
      relaxed_capacities(generate_layered(1, 0.05), 1.0),
      heuristic_policy(generate_layered(1, 0.05)).flows);
  CHECK(one.value == doctest::Approx(1.05).epsilon(1e-10));
}

TEST_CASE("upper_bound rejects non-conserving flows") {
  Instance inst = generate_layered(2, 0.1);
  Mat F = Mat::Zero(inst.network.edge_count(), 2);  // routes nothing
  CHECK_THROWS(upper_bound(inst, F));
}

TEST_CASE("optimality verifies on oracle primal-dual pairs") {
  std::mt19937_64 rng(246);
  int verified = 0;
  for (int trial = 0; trial < 6; ++trial) {
    Instance inst = relaxed_capacities(
        generate_random(5, 8, 3, SourceStyle::kContinuous, rng()), 10.0);
    testoracle::CrOracle ref = testoracle::solve_cr(inst);
    REQUIRE(ref.feasible);
    OptimalityReport rep = verify_optimality(inst, ref.F, ref.Pi, 1e-6);
    if (rep.all()) ++verified;
    // bounds computed from the oracle witnesses must pinch
    const double U = upper_bound(inst, ref.F).value;
    const double L = lower_bound(inst, ref.Pi);
    CHECK(U == doctest::Approx(ref.objective).epsilon(1e-6));
    CHECK(L == doctest::Approx(ref.objective).epsilon(1e-6));
  }
  CHECK(verified >= 5);  // allow one degenerate extraction
}

TEST_CASE("optimality detects a loose pair") {
  Instance inst = generate_layered(3, 0.01);
  HeuristicResult h = heuristic_policy(inst);
  const int K = 3;
  Mat Pi = (inst.network.price / K).replicate(1, K);
  OptimalityReport rep = verify_optimality(inst, h.flows, Pi, 1e-6);
  CHECK(rep.prices_valid);
  CHECK_FALSE(rep.tight);  // J_heur = 3.03 but sum of charges is 1.01
  CHECK(rep.worst_tightness_violation > 1.0);
}

TEST_CASE("optimality detects an invalid price matrix") {
  Instance inst = generate_layered(2, 0.1);
  HeuristicResult h = heuristic_policy(inst);
  Mat Pi = (inst.network.price / 2).replicate(1, 2);
  Pi(0, 0) = -0.05;
  OptimalityReport rep = verify_optimality(inst, h.flows, Pi, 1e-6);
  CHECK_FALSE(rep.prices_valid);
}

TEST_CASE("extend_policy reproduces scenarios at their own sources") {
  Instance inst = generate_layered(3, 0.01);
  HeuristicResult h = heuristic_policy(inst);
  for (int k = 0; k < 3; ++k) {
    ExtendedFlow ext = extend_policy(inst, h.flows, inst.scenarios.source(k));
    CHECK((ext.flow - h.flows.col(k)).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(ext.weights[k] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(ext.hull_residual < 1e-6);
  }
}

TEST_CASE("extend_policy handles the scenario mean") {
  Instance inst = generate_layered(3, 0.01);
  HeuristicResult h = heuristic_policy(inst);
  const Vec mean = inst.scenarios.sources.rowwise().mean();
  ExtendedFlow ext = extend_policy(inst, h.flows, mean);
  CHECK(ext.hull_residual < 1e-6);
  CHECK(ext.weights.minCoeff() >= -1e-8);
  CHECK(ext.weights.sum() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((inst.network.apply_incidence(ext.flow) + mean).lpNorm<Eigen::Infinity>() <
        1e-5);
}

TEST_CASE("extended flows stay under the heuristic reservation") {
  std::mt19937_64 rng(888);
  Instance inst = generate_random(5, 9, 4, SourceStyle::kContinuous, rng());
  HeuristicResult h = heuristic_policy(inst);
  const Vec r = h.flows.rowwise().maxCoeff();
  for (int trial = 0; trial < 40; ++trial) {
    Vec theta(4);
    for (int k = 0; k < 4; ++k) theta[k] = unit(rng) + 1e-3;
    theta /= theta.sum();
    const Vec s = inst.scenarios.sources * theta;
    ExtendedFlow ext = extend_policy(inst, h.flows, s);
    CHECK((ext.flow - r).maxCoeff() <= 1e-6);
    CHECK(ext.flow.minCoeff() >= -1e-6);
  }
}

TEST_CASE("extend_policy rejects sources outside the hull") {
  Instance inst = generate_layered(2, 0.1);
  HeuristicResult h = heuristic_policy(inst);
  Vec s = 3.0 * inst.scenarios.source(0);  // too much injection to be a mixture
  CHECK_THROWS_AS(extend_policy(inst, h.flows, s), std::runtime_error);
}
