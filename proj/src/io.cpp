#include "capres/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace capres {

using json = nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, p);
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& arr) {
  Vec v(arr.size());
  int i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

json mat_cols_to_json(const Mat& M) {
  // column per entry (one scenario each)
  json arr = json::array();
  for (int k = 0; k < M.cols(); ++k) arr.push_back(vec_to_json(M.col(k)));
  return arr;
}

Mat mat_cols_from_json(const json& arr) {
  if (arr.empty()) return Mat();
  const int K = static_cast<int>(arr.size());
  const int m = static_cast<int>(arr[0].size());
  Mat M(m, K);
  for (int k = 0; k < K; ++k) M.col(k) = vec_from_json(arr[k]);
  return M;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

std::uint64_t from_hex64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  const Network& net = inst.network;
  json doc;
  doc["n"] = net.node_count;
  json edges = json::array();
  for (const Edge& e : net.edges) {
    edges.push_back(json::array({e.tail + 1, e.head + 1}));  // 1-based on disk
  }
  doc["edges"] = std::move(edges);
  doc["capacity"] = vec_to_json(net.capacity);
  doc["price"] = vec_to_json(net.price);
  json rows = json::array();
  const Mat& S = inst.scenarios.sources;
  for (int k = 0; k < S.cols(); ++k) rows.push_back(vec_to_json(S.col(k)));
  doc["scenarios"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json doc = json::parse(text);
  Instance inst;
  Network& net = inst.network;
  net.node_count = doc.at("n").get<int>();
  for (const auto& e : doc.at("edges")) {
    if (e.size() != 2) throw std::runtime_error("instance: edge entries must be pairs");
    net.edges.push_back(Edge{e[0].get<int>() - 1, e[1].get<int>() - 1});
  }
  net.capacity = vec_from_json(doc.at("capacity"));
  net.price = vec_from_json(doc.at("price"));
  const auto& rows = doc.at("scenarios");
  if (rows.empty()) throw std::runtime_error("instance: no scenarios");
  Mat S(net.node_count, rows.size());
  int k = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != net.node_count) {
      throw std::runtime_error("instance: scenario row length does not match n");
    }
    S.col(k++) = vec_from_json(row);
  }
  inst.scenarios.sources = std::move(S);
  ValidationReport v = validate(inst);
  if (!v.ok()) {
    std::ostringstream os;
    os << "instance failed validation:";
    for (const auto& msg : v.violations) os << " [" << msg << "]";
    throw std::runtime_error(os.str());
  }
  return inst;
}

void write_instance(const Instance& inst, const std::string& path) {
  write_text(instance_to_json(inst), path);
}

Instance read_instance(const std::string& path) {
  return instance_from_json(read_text(path));
}

std::string result_to_json(const SolveReport& rep, const Instance& inst,
                           const SolverConfig& cfg, bool include_flows) {
  json doc;
  doc["instance_fingerprint"] = hex64(fingerprint(inst));
  doc["reservation"] = vec_to_json(rep.reservation);
  doc["upper_bound"] = rep.certificate.upper;
  doc["lower_bound"] = rep.certificate.lower;
  doc["rel_gap"] = rep.certificate.relative_gap();
  doc["heuristic_objective"] = rep.heuristic_objective;
  doc["lower_uniform"] = rep.lower_uniform;
  doc["scenario_charges"] = rep.scenario_charges;
  doc["termination"] = to_string(rep.reason);
  doc["iterations"] = rep.iterations;
  doc["rho"] = rep.rho;
  json config;
  config["mu"] = cfg.mu;
  config["alpha"] = cfg.alpha;
  config["eps_rel"] = cfg.eps_rel;
  config["lb_every"] = cfg.lb_every;
  config["max_iters"] = cfg.max_iters;
  config["workers"] = cfg.workers;
  config["heuristic_only"] = cfg.heuristic_only;
  doc["config"] = std::move(config);
  json timing;
  timing["solve_seconds"] = rep.solve_seconds;
  doc["timing"] = std::move(timing);
  if (include_flows) {
    doc["flows"] = mat_cols_to_json(rep.certificate.upper_witness);
    doc["scenario_prices"] = mat_cols_to_json(rep.certificate.lower_witness);
  }
  return doc.dump(2) + "\n";
}

void write_result(const SolveReport& rep, const Instance& inst, const SolverConfig& cfg,
                  bool include_flows, const std::string& path) {
  write_text(result_to_json(rep, inst, cfg, include_flows), path);
}

ResultDocument result_from_json(const std::string& text) {
  json doc = json::parse(text);
  ResultDocument res;
  res.instance_fingerprint = from_hex64(doc.at("instance_fingerprint").get<std::string>());
  res.reservation = vec_from_json(doc.at("reservation"));
  res.upper = doc.at("upper_bound").get<double>();
  res.lower = doc.at("lower_bound").get<double>();
  res.rel_gap = doc.at("rel_gap").get<double>();
  res.scenario_charges = doc.at("scenario_charges").get<std::vector<double>>();
  res.termination = doc.at("termination").get<std::string>();
  if (doc.contains("flows")) {
    res.has_flows = true;
    res.flows = mat_cols_from_json(doc["flows"]);
  }
  if (doc.contains("scenario_prices")) {
    res.has_prices = true;
    res.prices = mat_cols_from_json(doc["scenario_prices"]);
  }
  return res;
}

ResultDocument read_result(const std::string& path) {
  return result_from_json(read_text(path));
}

std::string history_to_csv(const std::vector<IterRecord>& history) {
  std::ostringstream os;
  os << "iter,U,U_best,L,L_best,rel_gap,primal_res,dual_res,elapsed_s\n";
  for (const IterRecord& r : history) {
    os << r.iter << ',' << shortest(r.upper) << ',' << shortest(r.upper_best) << ',';
    if (r.has_lower) os << shortest(r.lower);
    os << ',' << shortest(r.lower_best) << ',' << shortest(r.rel_gap) << ','
       << shortest(r.primal_residual) << ',' << shortest(r.dual_residual) << ','
       << shortest(r.elapsed_s) << '\n';
  }
  return os.str();
}

void write_history(const std::vector<IterRecord>& history, const std::string& path) {
  write_text(history_to_csv(history), path);
}

}  // namespace capres
