#include <chrono>
#include <fstream>
#include <numbers>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcm/biased.hpp"
#include "mcm/harness.hpp"
#include "mcm/shadow.hpp"

namespace {

using nlohmann::json;
using namespace mcm;

json matrix_to_json(const BinaryMatrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(m.get(r, c) ? 1 : 0);
    rows.push_back(row);
  }
  return rows;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_ensemble(size_t n, const std::string& format, const std::string& out) {
  MubEnsemble ens = build_ensemble(n);
  if (format != "json") throw CLI::ValidationError("--format must be json");
  json j;
  j["n"] = ens.n;
  j["poly"] = ens.poly.bits;
  j["elements"] = json::array();
  for (size_t e = 0; e < ens.size(); ++e) {
    json el;
    el["index"] = e;
    el["C"] = matrix_to_json(ens.elements[e].C);
    el["D"] = matrix_to_json(ens.elements[e].D);
    json gens = json::array();
    for (const PhasedPauli& g : element_generators(ens, e))
      gens.push_back(g.to_string());
    el["generators"] = gens;
    j["elements"].push_back(el);
  }
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int cmd_synth(size_t n, size_t v, const std::string& format,
              const std::string& out) {
  MubEnsemble ens = build_ensemble(n);
  if (v >= (size_t{1} << n)) throw CLI::ValidationError("--v must be < 2^n");
  Circuit c = synthesize(ens, v + 1);
  if (format == "text") {
    std::ostringstream header;
    header << "n=" << n << " v=" << v;
    write_output(out, circuit_to_text(c, header.str()));
  } else if (format == "json") {
    json j;
    j["n"] = n;
    j["v"] = v;
    j["depth"] = circuit_depth(c);
    j["gates"] = json::array();
    for (const Gate& g : c.gates) {
      json jg;
      jg["kind"] = gate_name(g.kind);
      jg["qubits"] = gate_is_two_qubit(g.kind) ? json::array({g.q0, g.q1})
                                               : json::array({g.q0});
      j["gates"].push_back(jg);
    }
    write_output(out, j.dump(2) + "\n");
  } else {
    throw CLI::ValidationError("--format must be text or json");
  }
  return 0;
}

StateVector make_named_state(const std::string& name, size_t n, double theta,
                             Rng& rng) {
  if (name == "zero") return make_zero_state(n);
  if (name == "ghz") return make_ghz_state(n);
  if (name == "ghz_theta") return make_ghz_theta_state(n, theta);
  if (name == "haar") return make_haar_state(n, rng);
  throw CLI::ValidationError("unknown state: " + name);
}

int cmd_estimate(const std::string& protocol, const std::string& state,
                 const std::string& obs, size_t n, size_t shots, uint64_t seed,
                 double theta, const std::string& obs_pauli_file,
                 const std::string& obs_stab_file, const std::string& out) {
  Rng rng(seed);
  Rng state_rng = rng.child(0xface);
  StateVector rho = make_named_state(state, n, theta, state_rng);

  DenseObservable o(n);
  if (!obs_pauli_file.empty()) {
    // Lines of `coeff pauli-string`, e.g. `0.5 XZI`.
    std::istringstream in(read_file(obs_pauli_file));
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      double coeff;
      std::string pstr;
      if (!(ls >> coeff >> pstr))
        throw std::runtime_error("bad pauli term line: " + line);
      PhasedPauli p = parse_pauli(pstr);
      if (p.n != n) throw std::runtime_error("pauli term has wrong width: " + line);
      o = add(o, pauli_to_dense(p), coeff);
      any = true;
    }
    if (!any) throw std::runtime_error("empty pauli term file");
  } else if (!obs_stab_file.empty()) {
    Circuit v = parse_circuit_text(read_file(obs_stab_file));
    if (v.n == 0) v.n = n;
    if (v.n != n) throw std::runtime_error("stabilizer circuit has wrong width");
    o = projector(apply_circuit(make_zero_state(n), v.inverse()));
  } else if (obs == "ghz") {
    o = projector(make_ghz_state(n));
  } else if (obs == "ghz_offdiag") {
    o = ghz_offdiag_observable(n);
  } else if (obs == "identity") {
    o = identity_observable(n);
  } else {
    throw CLI::ValidationError("unknown observable: " + obs);
  }

  Protocol p = parse_protocol(protocol);
  auto t0 = std::chrono::steady_clock::now();
  EstimateSeries series = p == Protocol::Biased
                              ? run_biased_protocol(rho, o, shots, rng)
                              : run_protocol(rho, o, shots, p, rng);
  auto t1 = std::chrono::steady_clock::now();
  json j;
  j["protocol"] = protocol;
  j["n"] = n;
  j["shots"] = shots;
  j["seed"] = seed;
  j["mean"] = series.mean();
  j["variance"] = series.variance();
  j["elapsed_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out) {
  ExperimentConfig cfg = parse_experiment_config(read_file(config_path));
  std::vector<ResultRow> rows = run_experiment(cfg);
  write_output(out, rows_to_csv(std::move(rows)));
  return 0;
}

int cmd_oracle(const std::string& suite, size_t max_n) {
  if (suite != "all") throw CLI::ValidationError("--suite must be 'all'");
  std::string report;
  bool ok = run_oracles(max_n, report);
  std::cout << report;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal Clifford measurement shadow-estimation toolkit"};
  app.require_subcommand(1);

  size_t n = 3, v = 0, shots = 10000, max_n = 4;
  uint64_t seed = 42;
  double theta = std::numbers::pi / 2;
  std::string format = "json", out, protocol = "mcm", state = "ghz", obs = "ghz";
  std::string config_path, suite = "all", obs_pauli_file, obs_stab_file;

  auto* ens_cmd = app.add_subcommand("ensemble", "Dump the measurement ensemble");
  ens_cmd->add_option("--n", n, "qubit count")->required();
  ens_cmd->add_option("--format", format, "output format (json)");
  ens_cmd->add_option("--out", out, "output file (default stdout)");

  auto* synth_cmd = app.add_subcommand("synth", "Synthesize one measurement circuit");
  synth_cmd->add_option("--n", n, "qubit count")->required();
  synth_cmd->add_option("--v", v, "element label v < 2^n")->required();
  std::string synth_format = "text";
  synth_cmd->add_option("--format", synth_format, "text or json");
  synth_cmd->add_option("--out", out, "output file (default stdout)");

  auto* est_cmd = app.add_subcommand("estimate", "Run one shadow-estimation series");
  est_cmd->add_option("--protocol", protocol, "mcm|clifford|pauli|biased");
  est_cmd->add_option("--state", state, "zero|ghz|ghz_theta|haar");
  est_cmd->add_option("--obs", obs, "ghz|ghz_offdiag|identity");
  est_cmd->add_option("--obs-pauli-file", obs_pauli_file,
                      "observable as `coeff pauli-string` lines");
  est_cmd->add_option("--obs-stab-file", obs_stab_file,
                      "observable as a stabilizer circuit file");
  est_cmd->add_option("--n", n, "qubit count")->required();
  est_cmd->add_option("--shots", shots, "snapshot count");
  est_cmd->add_option("--seed", seed, "RNG seed");
  est_cmd->add_option("--theta", theta, "state parameter (radians)");
  est_cmd->add_option("--out", out, "output file (default stdout)");

  auto* exp_cmd = app.add_subcommand("experiment", "Run a configured experiment grid");
  exp_cmd->add_option("--config", config_path, "JSON config file")->required();
  exp_cmd->add_option("--out", out, "CSV output file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Run the exact-identity oracle suites");
  oracle_cmd->add_option("--suite", suite, "suite selector (all)");
  oracle_cmd->add_option("--max-n", max_n, "largest qubit count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ens_cmd->parsed()) return cmd_ensemble(n, format, out);
    if (synth_cmd->parsed()) return cmd_synth(n, v, synth_format, out);
    if (est_cmd->parsed())
      return cmd_estimate(protocol, state, obs, n, shots, seed, theta,
                          obs_pauli_file, obs_stab_file, out);
    if (exp_cmd->parsed()) return cmd_experiment(config_path, out);
    if (oracle_cmd->parsed()) return cmd_oracle(suite, max_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
