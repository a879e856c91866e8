#include "mcm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace mcm {

namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {
    "ghz_fidelity",    "ghz_offdiag",       "ghz_theta_biased",
    "haar_vs_stabilizer", "product_xz_biased", "oa_sweep",
    "local_observable", "haar_average"};

std::string fmt_g(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

size_t worker_thread_count() {
  if (const char* env = std::getenv("MCM_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentConfig cfg;
  cfg.experiment = j.at("experiment").get<std::string>();
  if (!kExperiments.count(cfg.experiment))
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
  cfg.n_min = j.value("n_min", cfg.n_min);
  cfg.n_max = j.value("n_max", cfg.n_max);
  cfg.shots = j.value("shots", cfg.shots);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.num_states = j.value("num_states", cfg.num_states);
  if (j.contains("protocols"))
    cfg.protocols = j["protocols"].get<std::vector<std::string>>();
  if (j.contains("theta_grid"))
    cfg.theta_grid = j["theta_grid"].get<std::vector<double>>();
  if (j.contains("a_grid")) cfg.a_grid = j["a_grid"].get<std::vector<double>>();
  if (j.contains("k_grid")) cfg.k_grid = j["k_grid"].get<std::vector<size_t>>();
  if (cfg.n_min < 1 || cfg.n_max > kMaxSimQubits || cfg.n_min > cfg.n_max)
    throw std::invalid_argument("config: bad n range");
  if (cfg.shots < 100) throw std::invalid_argument("config: shots must be >= 100");
  for (const std::string& p : cfg.protocols) parse_protocol(p);
  return cfg;
}

namespace {

EstimateSeries run_named_protocol(const std::string& name, const StateVector& rho,
                                  const DenseObservable& o, size_t shots,
                                  Rng& rng) {
  Protocol p = parse_protocol(name);
  if (p == Protocol::Biased) return run_biased_protocol(rho, o, shots, rng);
  return run_protocol(rho, o, shots, p, rng);
}

struct Task {
  ResultRow row;  // pre-filled metadata
  std::function<void(ResultRow&, Rng&)> run;
};

std::vector<ResultRow> run_tasks(std::vector<Task>& tasks, uint64_t seed) {
  std::vector<ResultRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  size_t workers = std::min(worker_thread_count(), tasks.size());
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      ResultRow row = tasks[i].row;
      Rng rng = Rng(seed).child(i);
      row.seed = rng.seed();
      auto t0 = std::chrono::steady_clock::now();
      tasks[i].run(row, rng);
      auto t1 = std::chrono::steady_clock::now();
      row.elapsed_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
      rows[i] = std::move(row);
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

std::vector<double> default_theta_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(0.1 * i * std::numbers::pi);
  return g;
}

void fill_stats(ResultRow& row, const EstimateSeries& series) {
  row.mean = series.mean();
  row.variance = series.variance();
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  std::vector<Task> tasks;
  auto base_row = [&](const std::string& protocol, size_t n,
                      const std::string& params) {
    ResultRow r;
    r.experiment = cfg.experiment;
    r.protocol = protocol;
    r.n = n;
    r.params = params;
    r.shots = cfg.shots;
    return r;
  };

  if (cfg.experiment == "ghz_fidelity") {
    std::vector<std::string> protocols =
        cfg.protocols.empty()
            ? std::vector<std::string>{"mcm", "clifford", "pauli"}
            : cfg.protocols;
    for (size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (const std::string& p : protocols) {
        tasks.push_back({base_row(p, n, ""), [n, p, &cfg](ResultRow& row, Rng& rng) {
                           StateVector rho = make_ghz_state(n);
                           DenseObservable o = projector(rho);
                           fill_stats(row, run_named_protocol(p, rho, o,
                                                              cfg.shots, rng));
                         }});
      }
    }
  } else if (cfg.experiment == "ghz_offdiag") {
    for (size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      tasks.push_back({base_row("mcm", n, "part=offdiag"),
                       [n, &cfg](ResultRow& row, Rng& rng) {
                         StateVector rho = make_ghz_state(n);
                         DenseObservable o = ghz_offdiag_observable(n);
                         fill_stats(row, run_protocol(rho, o, cfg.shots,
                                                      Protocol::Mcm, rng));
                       }});
    }
  } else if (cfg.experiment == "ghz_theta_biased") {
    std::vector<std::string> protocols =
        cfg.protocols.empty() ? std::vector<std::string>{"mcm", "biased"}
                              : cfg.protocols;
    std::vector<double> thetas =
        cfg.theta_grid.empty() ? default_theta_grid() : cfg.theta_grid;
    for (size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (double theta : thetas) {
        for (const std::string& p : protocols) {
          tasks.push_back({base_row(p, n, "theta=" + fmt_g(theta)),
                           [n, p, theta, &cfg](ResultRow& row, Rng& rng) {
                             StateVector rho = make_ghz_theta_state(n, theta);
                             DenseObservable o = projector(rho);
                             fill_stats(row, run_named_protocol(
                                                 p, rho, o, cfg.shots, rng));
                           }});
        }
      }
    }
  } else if (cfg.experiment == "haar_vs_stabilizer") {
    std::vector<std::string> protocols =
        cfg.protocols.empty() ? std::vector<std::string>{"mcm", "biased"}
                              : cfg.protocols;
    size_t n = cfg.n_max;
    for (size_t s = 0; s < cfg.num_states; ++s) {
      char tag[32];
      std::snprintf(tag, sizeof tag, "%03zu", s);
      for (const std::string& p : protocols) {
        tasks.push_back({base_row(p, n, std::string("kind=haar;state=") + tag),
                         [n, p, s, &cfg](ResultRow& row, Rng& rng) {
                           Rng state_rng = Rng(cfg.seed ^ 0xabcd1234u).child(s);
                           StateVector rho = make_haar_state(n, state_rng);
                           DenseObservable o = projector(rho);
                           fill_stats(row, run_named_protocol(p, rho, o,
                                                              cfg.shots, rng));
                         }});
        tasks.push_back(
            {base_row(p, n, std::string("kind=stabilizer;state=") + tag),
             [n, p, s, &cfg](ResultRow& row, Rng& rng) {
               Rng state_rng = Rng(cfg.seed ^ 0x5137abcdu).child(s);
               Circuit v = sample_full_clifford(n, state_rng);
               StateVector rho = apply_circuit(make_zero_state(n), v.inverse());
               DenseObservable o = projector(rho);
               fill_stats(row,
                          run_named_protocol(p, rho, o, cfg.shots, rng));
             }});
      }
    }
  } else if (cfg.experiment == "product_xz_biased") {
    std::vector<std::string> protocols =
        cfg.protocols.empty() ? std::vector<std::string>{"mcm", "biased"}
                              : cfg.protocols;
    std::vector<double> thetas =
        cfg.theta_grid.empty() ? default_theta_grid() : cfg.theta_grid;
    for (size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (double theta : thetas) {
        for (const std::string& p : protocols) {
          tasks.push_back({base_row(p, n, "theta=" + fmt_g(theta)),
                           [n, p, theta, &cfg](ResultRow& row, Rng& rng) {
                             StateVector rho = make_zero_state(n);
                             DenseObservable o =
                                 xz_product_observable(n, n, theta);
                             fill_stats(row, run_named_protocol(
                                                 p, rho, o, cfg.shots, rng));
                           }});
        }
      }
    }
  } else if (cfg.experiment == "oa_sweep") {
    std::vector<double> as =
        cfg.a_grid.empty() ? std::vector<double>{0.0, 0.2, 0.5, 0.8, 1.0}
                           : cfg.a_grid;
    for (size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (double a : as) {
        tasks.push_back({base_row("mcm", n, "a=" + fmt_g(a)),
                         [n, a, &cfg](ResultRow& row, Rng& rng) {
                           StateVector rho = make_ghz_state(n);
                           DenseObservable o = corner_observable(n, a);
                           fill_stats(row, run_protocol(rho, o, cfg.shots,
                                                        Protocol::Mcm, rng));
                         }});
      }
    }
  } else if (cfg.experiment == "local_observable") {
    std::vector<std::string> protocols =
        cfg.protocols.empty() ? std::vector<std::string>{"mcm", "pauli"}
                              : cfg.protocols;
    size_t n = cfg.n_max;
    std::vector<size_t> ks = cfg.k_grid;
    if (ks.empty())
      for (size_t k = 1; k <= std::min<size_t>(7, n); ++k) ks.push_back(k);
    std::vector<double> thetas = cfg.theta_grid.empty()
                                     ? std::vector<double>{std::numbers::pi / 4}
                                     : cfg.theta_grid;
    for (size_t k : ks) {
      for (double theta : thetas) {
        for (const std::string& p : protocols) {
          char tag[64];
          std::snprintf(tag, sizeof tag, "k=%02zu;theta=%s", k,
                        fmt_g(theta).c_str());
          tasks.push_back({base_row(p, n, tag),
                           [n, k, p, theta, &cfg](ResultRow& row, Rng& rng) {
                             StateVector rho = make_zero_state(n);
                             DenseObservable o =
                                 xz_product_observable(n, k, theta);
                             fill_stats(row, run_named_protocol(
                                                 p, rho, o, cfg.shots, rng));
                           }});
        }
      }
    }
  } else if (cfg.experiment == "haar_average") {
    std::vector<std::string> protocols =
        cfg.protocols.empty() ? std::vector<std::string>{"mcm"} : cfg.protocols;
    for (size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (size_t s = 0; s < cfg.num_states; ++s) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "state=%03zu", s);
        for (const std::string& p : protocols) {
          tasks.push_back({base_row(p, n, tag),
                           [n, p, s, &cfg](ResultRow& row, Rng& rng) {
                             Rng state_rng =
                                 Rng(cfg.seed ^ 0x77aa55eeu).child(s * 64 + n);
                             StateVector rho = make_haar_state(n, state_rng);
                             DenseObservable o = projector(rho);
                             fill_stats(row, run_named_protocol(
                                                 p, rho, o, cfg.shots, rng));
                           }});
        }
      }
    }
  } else {
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
  }

  std::vector<ResultRow> rows = run_tasks(tasks, cfg.seed);
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.protocol, a.n, a.params) <
           std::tie(b.experiment, b.protocol, b.n, b.params);
  });
  return rows;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

std::string rows_to_csv(std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.protocol, a.n, a.params) <
           std::tie(b.experiment, b.protocol, b.n, b.params);
  });
  std::ostringstream os;
  os << "experiment,protocol,n,params,mean,variance,shots,seed,elapsed_ms\r\n";
  for (const ResultRow& r : rows) {
    os << csv_escape(r.experiment) << ',' << csv_escape(r.protocol) << ','
       << r.n << ',' << csv_escape(r.params) << ',' << fmt_full(r.mean) << ','
       << fmt_full(r.variance) << ',' << r.shots << ',' << r.seed << ','
       << fmt_full(r.elapsed_ms) << "\r\n";
  }
  return os.str();
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("fit_slope: need >= 3 points");
  size_t m = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_slope: degenerate x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < m; ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  if (m > 2) fit.stderr_slope = std::sqrt(ss_res / (m - 2) / sxx);
  return fit;
}

namespace {

bool suite_channel_identity(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(3, max_n); ++n) {
    MubEnsemble ens = build_ensemble(n);
    Rng rng(1000 + n);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      DenseObservable rho = projector(make_haar_state(n, rng));
      DenseObservable got = channel_oracle(ens, rho);
      double scale = 1.0 / (static_cast<double>(rho.dim()) + 1.0);
      for (size_t r = 0; r < rho.dim(); ++r)
        for (size_t c = 0; c < rho.dim(); ++c) {
          Complex want = rho.at(r, c) * scale;
          if (r == c) want += scale;
          worst = std::max(worst, std::abs(got.at(r, c) - want));
        }
    }
    if (worst > 1e-10) ok = false;
  }
  os << (ok ? "PASS" : "FAIL") << " channel_identity\n";
  return ok;
}

bool suite_pauli_partition(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(6, max_n); ++n) {
    MubEnsemble ens = build_ensemble(n);
    std::set<uint64_t> seen;
    bool dup = false;
    for (size_t e = 0; e < ens.size(); ++e) {
      auto gens = element_generators(ens, e);
      for (uint32_t m = 1; m < (1u << n); ++m) {
        PhasedPauli s = stabilizer_product(gens, m);
        uint64_t key = (static_cast<uint64_t>(s.x) << 32) | s.z;
        if (!seen.insert(key).second) dup = true;
      }
    }
    size_t want = ((size_t{1} << n) + 1) * ((size_t{1} << n) - 1);
    if (dup || seen.size() != want) ok = false;
  }
  os << (ok ? "PASS" : "FAIL") << " pauli_partition\n";
  return ok;
}

bool suite_synthesis(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(8, max_n); ++n) {
    MubEnsemble ens = build_ensemble(n);
    for (size_t e = 1; e < ens.size(); ++e) {
      const ZTableau& t0 = ens.elements[e];
      if (!is_hankel(t0.D)) ok = false;
      Circuit c = synthesize(ens, e);
      if (circuit_depth(c) > n + 1) ok = false;
      ZTableau t = t0;
      for (const Gate& g : c.gates) t = apply_gate_to_ztableau(t, g);
      if (!(t.C == BinaryMatrix(n, n)) || !(t.D == BinaryMatrix::identity(n)))
        ok = false;
    }
  }
  os << (ok ? "PASS" : "FAIL") << " synthesis_replay\n";
  return ok;
}

bool suite_mub_overlap(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(4, max_n); ++n) {
    MubEnsemble ens = build_ensemble(n);
    size_t dim = size_t{1} << n;
    std::vector<std::vector<StateVector>> basis_states;
    for (size_t e = 0; e < ens.size(); ++e) {
      Circuit inv = synthesize(ens, e).inverse();
      std::vector<StateVector> states;
      StateVector b = make_zero_state(n);
      for (size_t idx = 0; idx < dim; ++idx) {
        b.amps.assign(dim, 0.0);
        b.amps[idx] = 1.0;
        states.push_back(apply_circuit(b, inv));
      }
      basis_states.push_back(std::move(states));
    }
    double target = 1.0 / static_cast<double>(dim);
    for (size_t e1 = 0; e1 < ens.size(); ++e1) {
      for (size_t e2 = e1; e2 < ens.size(); ++e2) {
        for (size_t b1 = 0; b1 < dim; ++b1) {
          for (size_t b2 = 0; b2 < dim; ++b2) {
            Complex ov = 0;
            for (size_t k = 0; k < dim; ++k)
              ov += std::conj(basis_states[e1][b1].amps[k]) *
                    basis_states[e2][b2].amps[k];
            double want = e1 == e2 ? (b1 == b2 ? 1.0 : 0.0) : target;
            if (std::abs(std::norm(ov) - want) > 1e-10) ok = false;
          }
        }
      }
    }
  }
  os << (ok ? "PASS" : "FAIL") << " mub_overlap\n";
  return ok;
}

bool suite_exact_moments(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(3, max_n); ++n) {
    MubEnsemble ens = build_ensemble(n);
    std::vector<Circuit> circuits = ensemble_circuits(ens);
    size_t dim = size_t{1} << n;
    double dim1 = static_cast<double>(dim) + 1.0;
    Rng rng(2000 + n);
    // Single-Pauli second moment at a random pure state.
    DenseObservable rho = projector(make_haar_state(n, rng));
    PhasedPauli pw{n, 1, (n > 1 ? 2u : 1u), (n > 1 ? 0 : 1)};
    DenseObservable o = pauli_to_dense(pw);
    double moment = 0;
    for (size_t e = 0; e < ens.size(); ++e) {
      DenseObservable orot = conjugate_observable(o, circuits[e]);
      DenseObservable rrot = conjugate_observable(rho, circuits[e]);
      for (size_t b = 0; b < dim; ++b) {
        double est = dim1 * orot.at(b, b).real();
        moment += rrot.at(b, b).real() * est * est / dim1;
      }
    }
    if (std::abs(moment - dim1) > 1e-8) ok = false;
    // Locally-scrambled equality at the maximally mixed state.
    DenseObservable o0 = traceless_part(projector(make_haar_state(n, rng)));
    double tr_sq = 0;
    for (size_t r = 0; r < dim; ++r)
      for (size_t c = 0; c < dim; ++c) tr_sq += std::norm(o0.at(r, c));
    double m2 = 0;
    for (size_t e = 0; e < ens.size(); ++e) {
      DenseObservable orot = conjugate_observable(o0, circuits[e]);
      for (size_t b = 0; b < dim; ++b) {
        double est = dim1 * orot.at(b, b).real();
        m2 += est * est / dim1 / static_cast<double>(dim);
      }
    }
    if (std::abs(m2 - dim1 / static_cast<double>(dim) * tr_sq) > 1e-8) ok = false;
  }
  os << (ok ? "PASS" : "FAIL") << " exact_moments\n";
  return ok;
}

bool suite_overlap_profile(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(4, max_n); ++n) {
    MubEnsemble ens = build_ensemble(n);
    std::vector<Circuit> circuits = ensemble_circuits(ens);
    Rng rng(3000 + n);
    for (int trial = 0; trial < 5; ++trial) {
      StabilizerObservable o{sample_full_clifford(n, rng)};
      double total = 0;
      try {
        for (size_t e = 0; e < ens.size(); ++e)
          total += alpha_profile(o, ens, circuits, e).max_alpha;
      } catch (const std::logic_error&) {
        ok = false;
        break;
      }
      if (std::abs(total - 2.0) > 1e-9) ok = false;
    }
  }
  os << (ok ? "PASS" : "FAIL") << " overlap_profile\n";
  return ok;
}

bool suite_zero_variance(size_t max_n, std::ostringstream& os) {
  bool ok = true;
  for (size_t n = 1; n <= std::min<size_t>(4, max_n); ++n) {
    Rng rng(4000 + n);
    for (int trial = 0; trial < 3; ++trial) {
      Circuit v = sample_full_clifford(n, rng);
      StateVector rho = apply_circuit(make_zero_state(n), v.inverse());
      DenseObservable o = projector(rho);
      EstimateSeries s = run_biased_protocol(rho, o, 200, rng);
      for (double val : s.values)
        if (std::abs(val - 1.0) > 1e-9) ok = false;
    }
  }
  os << (ok ? "PASS" : "FAIL") << " stabilizer_zero_variance\n";
  return ok;
}

}  // namespace

bool run_oracles(size_t max_n, std::string& report) {
  std::ostringstream os;
  bool ok = true;
  ok &= suite_channel_identity(max_n, os);
  ok &= suite_pauli_partition(max_n, os);
  ok &= suite_synthesis(max_n, os);
  ok &= suite_mub_overlap(max_n, os);
  ok &= suite_exact_moments(max_n, os);
  ok &= suite_overlap_profile(max_n, os);
  ok &= suite_zero_variance(max_n, os);
  report = os.str();
  return ok;
}

}  // namespace mcm
