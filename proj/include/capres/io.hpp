#pragma once

#include "capres/network.hpp"
#include "capres/solver.hpp"

#include <string>

namespace capres {

// Instance file schema:
//   {"n": int, "edges": [[tail, head], ...], "capacity": [...],
//    "price": [...], "scenarios": [[s_1, ..., s_n], ...]}
// Node ids are 1-based in files, 0-based in memory. Scenario rows are
// one per k. The reader validates on load and throws on violations.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
void write_instance(const Instance& inst, const std::string& path);
Instance read_instance(const std::string& path);

// Result document: certificate, reservation, charges, config echo and
// timing; flows/prices are included when include_flows is set (needed
// for full certificate re-checking).
std::string result_to_json(const SolveReport& rep, const Instance& inst,
                           const SolverConfig& cfg, bool include_flows);
void write_result(const SolveReport& rep, const Instance& inst, const SolverConfig& cfg,
                  bool include_flows, const std::string& path);

// Parsed result file, for certificate checking.
struct ResultDocument {
  std::uint64_t instance_fingerprint = 0;
  Vec reservation;
  double upper = 0.0;
  double lower = 0.0;
  double rel_gap = 0.0;
  std::vector<double> scenario_charges;
  std::string termination;
  bool has_flows = false;
  Mat flows;  // upper-bound witness
  bool has_prices = false;
  Mat prices;  // lower-bound witness
};
ResultDocument result_from_json(const std::string& text);
ResultDocument read_result(const std::string& path);

// History CSV: header plus one row per iteration, in the order
// iter,U,U_best,L,L_best,rel_gap,primal_res,dual_res,elapsed_s with L
// blank off the lower-bound cadence. Full round-trip precision.
std::string history_to_csv(const std::vector<IterRecord>& history);
void write_history(const std::vector<IterRecord>& history, const std::string& path);

}  // namespace capres
