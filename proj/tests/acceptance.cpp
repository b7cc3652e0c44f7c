// End-to-end acceptance runs. Each numbered criterion prints one
// PASS/FAIL line; the process exits nonzero if any fail.
#include "capres/cli.hpp"
#include "capres/generators.hpp"
#include "capres/io.hpp"
#include "capres/prox_max.hpp"
#include "capres/solver.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace capres;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct Line {
  bool ok = false;
  std::string detail;
  double elapsed = 0.0;
};
Line lines[10];

void report(int criterion, bool ok, const std::string& detail, double elapsed) {
  lines[criterion] = {ok, detail, elapsed};
  if (!ok) ++failures;
}

// Criterion 4 aggregates the dual-iterate properties over every solve
// the suite performs.
double worst_pi_neg = 0.0, worst_pi_rowsum = 0.0, worst_tightness = 0.0;
int tracked_solves = 0;

SolveReport tracked_solve(const Instance& inst, const SolverConfig& cfg) {
  SolveReport rep = solve(inst, cfg);
  worst_pi_neg = std::max(worst_pi_neg, rep.worst_pi_negativity);
  worst_pi_rowsum = std::max(worst_pi_rowsum, rep.worst_pi_rowsum_error);
  worst_tightness = std::max(worst_tightness, rep.worst_tightness_error);
  ++tracked_solves;
  return rep;
}

void criterion1() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  double worst_each = 0.0;
  for (int a : {2, 3, 5}) {
    for (double eps : {0.1, 0.01}) {
      Timer t;
      Instance inst = generate_layered(a, eps);
      HeuristicResult h = heuristic_policy(inst);
      const double jheur_expect = a * (eps + 1.0);
      if (std::abs(h.objective - jheur_expect) > 1e-9) {
        ok = false;
        detail << "a=" << a << " eps=" << eps << " heuristic off; ";
      }
      SolverConfig cfg;
      cfg.eps_rel = 1e-8;
      cfg.max_iters = 30000;
      cfg.lb_every = 5;
      SolveReport rep = tracked_solve(inst, cfg);
      const double target = (2 * a - 1) * eps + 1.0;
      if (rep.certificate.upper > target + 1e-6) {
        ok = false;
        detail << "a=" << a << " eps=" << eps << " U=" << rep.certificate.upper
               << " > " << target << "; ";
      }
      worst_each = std::max(worst_each, t.seconds());
    }
  }
  for (int a : {2, 3, 5}) {
    Timer t;
    const double eps = 1e-4;
    Instance inst = generate_layered(a, eps);
    HeuristicResult h = heuristic_policy(inst);
    SolverConfig cfg;
    cfg.eps_rel = 1e-8;
    cfg.max_iters = 30000;
    cfg.lb_every = 5;
    SolveReport rep = tracked_solve(inst, cfg);
    const double ratio = h.objective / rep.certificate.upper;
    if (ratio < a - 0.1) {
      ok = false;
      detail << "a=" << a << " ratio=" << ratio << " < " << a - 0.1 << "; ";
    }
    worst_each = std::max(worst_each, t.seconds());
  }
  if (worst_each >= 5.0) {
    ok = false;
    detail << "slowest case " << worst_each << "s; ";
  }
  if (ok) detail << "layered family bounds and K-suboptimality tightness";
  report(1, ok, detail.str(), total.seconds());
}

struct OracleCase {
  Instance inst;
  double optimum;
};
std::vector<OracleCase> oracle_cases;

void criterion2() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  std::mt19937_64 rng(20260824);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);           // 4..8
    const int max_m = std::min(16, n * (n - 1) / 2);
    const int m = (n - 1) + static_cast<int>(rng() % (max_m - n + 2));
    const int K = 1 + static_cast<int>(rng() % 5);
    Instance inst = generate_random(n, m, K, SourceStyle::kContinuous, rng());
    testoracle::CrOracle ref = testoracle::solve_cr(inst);
    if (!ref.feasible) {
      ok = false;
      detail << "oracle failed on trial " << trial << "; ";
      continue;
    }
    oracle_cases.push_back({inst, ref.objective});
    SolverConfig cfg;
    cfg.eps_rel = 1e-5;
    cfg.max_iters = 20000;
    cfg.lb_every = 5;
    SolveReport rep = tracked_solve(inst, cfg);
    const double L = rep.certificate.lower, U = rep.certificate.upper;
    if (L > ref.objective + 1e-7 || U < ref.objective - 1e-7) {
      ok = false;
      detail << "trial " << trial << " [L,U]=[" << L << "," << U
             << "] misses J*=" << ref.objective << "; ";
    }
    worst_rel = std::max(worst_rel, std::abs(U - ref.objective) / ref.objective);
  }
  if (worst_rel > 1e-4) {
    ok = false;
    detail << "worst |U-J*|/J* = " << worst_rel << "; ";
  }
  if (total.seconds() >= 60.0) {
    ok = false;
    detail << "over budget; ";
  }
  if (ok) {
    detail << "50 instances bracketed, worst |U-J*|/J* = " << worst_rel;
  }
  report(2, ok, detail.str(), total.seconds());
}

void criterion3() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  std::mt19937_64 rng(99);
  double worst_kkt = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int K = 1 + static_cast<int>(rng() % 16);
    Vec u(K);
    for (int i = 0; i < K; ++i) u[i] = 10.0 * testhelp::unit(rng) - 5.0;
    const double beta = 5.0 * testhelp::unit(rng);
    ProxMaxResult r = prox_weighted_max(u, beta);
    double slack = 0.0;
    for (int i = 0; i < K; ++i) {
      slack += std::max(0.0, u[i] - r.t);
      worst_kkt = std::max(worst_kkt, std::abs(r.x[i] - std::min(r.t, u[i])));
    }
    worst_kkt = std::max(worst_kkt, std::abs(slack - beta));

    if (trial % 500 == 0) {  // sampled subset vs random competitors
      const double best = beta * r.t + 0.5 * (r.x - u).squaredNorm();
      for (int c = 0; c < 1000; ++c) {
        Vec x(K);
        for (int i = 0; i < K; ++i) x[i] = 12.0 * testhelp::unit(rng) - 6.0;
        const double t = x.maxCoeff() + 2.0 * testhelp::unit(rng);
        const double obj = beta * t + 0.5 * (x - u).squaredNorm();
        if (obj < best - 1e-10) {
          ok = false;
          detail << "competitor beat the prox on trial " << trial << "; ";
        }
      }
    }
  }
  if (worst_kkt > 1e-12) {
    ok = false;
    detail << "worst KKT residual " << worst_kkt << "; ";
  }
  if (total.seconds() >= 5.0) {
    ok = false;
    detail << "over budget; ";
  }
  if (ok) detail << "10000 KKT checks, worst residual " << worst_kkt;
  report(3, ok, detail.str(), total.seconds());
}

void criterion4() {
  const bool ok = worst_pi_neg <= 1e-10 && worst_pi_rowsum <= 1e-8 &&
                  worst_tightness <= 1e-6;
  std::ostringstream detail;
  detail << tracked_solves << " solves: worst Pi negativity " << worst_pi_neg
         << ", row-sum error " << worst_pi_rowsum << ", tightness "
         << worst_tightness;
  report(4, ok, detail.str(), 0.0);
}

void criterion5() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  for (size_t i = 0; i < oracle_cases.size(); ++i) {
    const Instance& inst = oracle_cases[i].inst;
    const double jstar = oracle_cases[i].optimum;
    const int K = inst.scenarios.count();
    HeuristicResult h = heuristic_policy(inst);
    double manual = 0.0;
    for (int k = 0; k < K; ++k) {
      manual += inst.network.price.dot(h.flows.col(k));
    }
    manual /= K;
    if (std::abs(h.lower_uniform - manual) > 1e-12) {
      ok = false;
      detail << "case " << i << " L_uniform mismatch; ";
    }
    if (!(h.lower_uniform <= jstar + 1e-6 && jstar <= h.objective + 1e-6 &&
          h.objective <= K * jstar + 1e-6)) {
      ok = false;
      detail << "case " << i << " sandwich broken; ";
    }
  }
  if (ok) {
    detail << "sandwich held on all " << oracle_cases.size() << " oracle instances";
  }
  report(5, ok, detail.str(), total.seconds());
}

Instance desk_instance() {
  return generate_random(50, 150, 20, SourceStyle::kContinuous, 17);
}

SolverConfig desk_config() {
  SolverConfig cfg;
  cfg.eps_rel = 0.01;
  cfg.mu = 0.05;
  cfg.alpha = 1.8;
  cfg.lb_every = 10;
  cfg.max_iters = 5000;
  cfg.workers = 1;
  return cfg;
}

SolveReport desk_report;
bool desk_solved = false;

void criterion6() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  Instance inst = desk_instance();
  desk_report = tracked_solve(inst, desk_config());
  desk_solved = true;
  const SolveReport& rep = desk_report;
  const double final_gap = rep.certificate.relative_gap();
  const double initial_gap =
      (rep.heuristic_objective - rep.lower_uniform) / rep.lower_uniform;
  if (rep.reason != TerminationReason::kConverged) {
    ok = false;
    detail << "did not converge (" << to_string(rep.reason) << "); ";
  }
  if (final_gap > 0.01) {
    ok = false;
    detail << "final gap " << final_gap << "; ";
  }
  if (initial_gap < 10.0 * final_gap) {
    ok = false;
    detail << "initial gap " << initial_gap << " not 10x final " << final_gap << "; ";
  }
  if (total.seconds() >= 120.0) {
    ok = false;
    detail << "over budget; ";
  }
  if (ok) {
    detail << rep.iterations << " iterations, gap " << initial_gap << " -> "
           << final_gap;
  }
  report(6, ok, detail.str(), total.seconds());
}

void criterion7() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  const SolveReport& base = desk_report;

  Instance priced = desk_instance();
  priced.network.price *= 10.0;
  SolveReport rp = tracked_solve(priced, desk_config());

  Instance sized = desk_instance();
  sized.scenarios.sources *= 10.0;
  sized.network.capacity *= 10.0;
  SolveReport rs = tracked_solve(sized, desk_config());

  auto compare = [&](const SolveReport& other, const char* name) {
    if (other.iterations != base.iterations ||
        other.history.size() != base.history.size()) {
      ok = false;
      detail << name << " iteration count " << other.iterations << " vs "
             << base.iterations << "; ";
      return;
    }
    double worst = 0.0;
    for (size_t i = 0; i < base.history.size(); ++i) {
      const IterRecord& a = base.history[i];
      const IterRecord& b = other.history[i];
      worst = std::max(worst, std::abs(b.upper_best - 10.0 * a.upper_best) /
                                  (10.0 * a.upper_best));
      worst = std::max(worst, std::abs(b.lower_best - 10.0 * a.lower_best) /
                                  (10.0 * a.lower_best));
    }
    if (worst > 1e-6) {
      ok = false;
      detail << name << " trajectory deviates by " << worst << "; ";
    }
  };
  compare(rp, "p*10");
  compare(rs, "(S,c)*10");
  if (ok) {
    detail << "both rescalings: same iteration count, trajectories scale by 10";
  }
  report(7, ok, detail.str(), total.seconds());
}

void criterion8() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  Instance inst = generate_random(10, 25, 6, SourceStyle::kContinuous, 42);
  SolverConfig cfg;
  cfg.eps_rel = 1e-3;
  cfg.max_iters = 5000;
  SolveReport rep = tracked_solve(inst, cfg);
  ResultDocument fresh = result_from_json(result_to_json(rep, inst, cfg, true));
  if (!cli::check_result(inst, fresh).pass()) {
    ok = false;
    detail << "fresh result rejected; ";
  }
  ResultDocument t1 = fresh;
  t1.reservation *= 0.8;
  if (cli::check_result(inst, t1).pass()) {
    ok = false;
    detail << "lowered reservation accepted; ";
  }
  ResultDocument t2 = fresh;
  t2.prices.col(0) *= 1.5;
  if (cli::check_result(inst, t2).pass()) {
    ok = false;
    detail << "scaled price column accepted; ";
  }
  ResultDocument t3 = fresh;
  t3.flows(0, 0) += 0.2;
  if (cli::check_result(inst, t3).pass()) {
    ok = false;
    detail << "non-conserving flow accepted; ";
  }
  if (ok) detail << "fresh certificate accepted, all three tamperings rejected";
  report(8, ok, detail.str(), total.seconds());
}

// Timing differs between runs by construction, so the wall-clock column
// is dropped before comparing histories.
std::string strip_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out << line.substr(0, pos) << "\n";
  }
  return out.str();
}

void criterion9() {
  Timer total;
  bool ok = true;
  std::ostringstream detail;
  Instance inst = desk_instance();
  const std::string base = strip_elapsed(history_to_csv(desk_report.history));
  for (int workers : {4, 0}) {  // 0 resolves to all hardware threads
    SolverConfig cfg = desk_config();
    cfg.workers = workers;
    SolveReport rep = tracked_solve(inst, cfg);
    if (strip_elapsed(history_to_csv(rep.history)) != base) {
      ok = false;
      detail << "workers=" << workers << " history differs; ";
    }
  }
  if (ok) detail << "histories identical for worker counts 1, 4, max";
  report(9, ok, detail.str(), total.seconds());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion4();  // aggregates over every solve above
  for (int i = 1; i <= 9; ++i) {
    std::printf("criterion %d: %s  (%s, %.2fs)\n", i, lines[i].ok ? "PASS" : "FAIL",
                lines[i].detail.c_str(), lines[i].elapsed);
  }
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
