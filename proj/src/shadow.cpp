#include "mcm/shadow.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Mcm: return "mcm";
    case Protocol::FullClifford: return "clifford";
    case Protocol::Pauli: return "pauli";
    case Protocol::Biased: return "biased";
  }
  return "?";
}

Protocol parse_protocol(const std::string& s) {
  if (s == "mcm") return Protocol::Mcm;
  if (s == "clifford") return Protocol::FullClifford;
  if (s == "pauli") return Protocol::Pauli;
  if (s == "biased") return Protocol::Biased;
  throw std::invalid_argument("unknown protocol: " + s);
}

double EstimateSeries::mean() const {
  // Kahan summation keeps the reduction order-insensitive in practice.
  double sum = 0, comp = 0;
  for (double v : values) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double EstimateSeries::variance() const {
  if (values.size() < 2) return 0.0;
  double m = mean();
  double sum = 0, comp = 0;
  for (double v : values) {
    double y = (v - m) * (v - m) - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(values.size() - 1);
}

size_t sample_mcm_element(const MubEnsemble& ens, Rng& rng) {
  return static_cast<size_t>(rng.next_below(ens.size()));
}

double mcm_estimate(const DenseObservable& o, const Circuit& u, uint64_t b) {
  StateVector basis = make_zero_state(o.n);
  basis.amps[0] = 0;
  basis.amps[b] = 1;
  StateVector phi = apply_circuit(basis, u.inverse());
  double dim1 = static_cast<double>(o.dim()) + 1.0;
  return dim1 * expectation(phi, o) - o.trace().real();
}

std::vector<Circuit> ensemble_circuits(const MubEnsemble& ens) {
  std::vector<Circuit> cs;
  cs.reserve(ens.size());
  for (size_t i = 0; i < ens.size(); ++i) cs.push_back(synthesize(ens, i));
  return cs;
}

namespace {

EstimateSeries run_mcm(const StateVector& rho, const DenseObservable& o,
                       size_t shots, Rng& rng) {
  MubEnsemble ens = build_ensemble(rho.n);
  std::vector<Circuit> circuits = ensemble_circuits(ens);
  double tr = o.trace().real();
  double dim1 = static_cast<double>(o.dim()) + 1.0;
  // Rotate the observable and the state once per element; shots then cost
  // O(1) lookups.
  std::vector<std::vector<double>> diag(ens.size());
  std::vector<DiscreteSampler> born;
  born.reserve(ens.size());
  for (size_t e = 0; e < ens.size(); ++e) {
    DenseObservable rot = conjugate_observable(o, circuits[e]);
    diag[e].resize(rot.dim());
    for (size_t b = 0; b < rot.dim(); ++b) diag[e][b] = rot.at(b, b).real();
    born.emplace_back(probabilities(apply_circuit(rho, circuits[e])));
  }
  EstimateSeries series{Protocol::Mcm, rho.n, rng.seed(), {}};
  series.values.reserve(shots);
  for (size_t s = 0; s < shots; ++s) {
    size_t e = sample_mcm_element(ens, rng);
    size_t b = born[e].sample(rng);
    series.values.push_back(dim1 * diag[e][b] - tr);
  }
  return series;
}

EstimateSeries run_full_clifford(const StateVector& rho, const DenseObservable& o,
                                 size_t shots, Rng& rng) {
  double tr = o.trace().real();
  double dim1 = static_cast<double>(o.dim()) + 1.0;
  EstimateSeries series{Protocol::FullClifford, rho.n, rng.seed(), {}};
  series.values.reserve(shots);
  StateVector basis = make_zero_state(rho.n);
  for (size_t s = 0; s < shots; ++s) {
    Circuit u = sample_full_clifford(rho.n, rng);
    StateVector rotated = apply_circuit(rho, u);
    uint64_t b = sample_bitstring(rotated, rng).to_mask();
    basis.amps.assign(basis.amps.size(), 0.0);
    basis.amps[b] = 1.0;
    StateVector phi = apply_circuit(basis, u.inverse());
    series.values.push_back(dim1 * expectation(phi, o) - tr);
  }
  return series;
}

EstimateSeries run_pauli(const StateVector& rho, const DenseObservable& o,
                         size_t shots, Rng& rng) {
  std::vector<PauliTerm> terms = pauli_decompose(o);
  EstimateSeries series{Protocol::Pauli, rho.n, rng.seed(), {}};
  series.values.reserve(shots);
  std::vector<int> bases(rho.n);
  for (size_t s = 0; s < shots; ++s) {
    for (size_t j = 0; j < rho.n; ++j) bases[j] = static_cast<int>(rng.next_below(3));
    StateVector rotated = apply_circuit(rho, pauli_basis_circuit(bases));
    uint64_t b = sample_bitstring(rotated, rng).to_mask();
    series.values.push_back(pauli_shadow_estimate(terms, bases, b));
  }
  return series;
}

}  // namespace

EstimateSeries run_protocol(const StateVector& rho, const DenseObservable& o,
                            size_t shots, Protocol protocol, Rng& rng) {
  if (rho.n != o.n) throw std::invalid_argument("run_protocol: size mismatch");
  switch (protocol) {
    case Protocol::Mcm: return run_mcm(rho, o, shots, rng);
    case Protocol::FullClifford: return run_full_clifford(rho, o, shots, rng);
    case Protocol::Pauli: return run_pauli(rho, o, shots, rng);
    default:
      throw std::invalid_argument("run_protocol: use run_biased_protocol");
  }
}

namespace {

// Constraint row forcing comm(w, v) = target: coefficients (w_z | w_x)
// over v = (v_x | v_z).
BitVector constraint_row(size_t n, uint64_t wx, uint64_t wz) {
  BitVector row(2 * n);
  for (size_t j = 0; j < n; ++j) {
    if ((wz >> j) & 1) row.set(j, true);
    if ((wx >> j) & 1) row.set(n + j, true);
  }
  return row;
}

uint64_t combine_kernel(const std::vector<BitVector>& basis, Rng& rng) {
  uint64_t v = 0;
  for (const BitVector& k : basis)
    if (rng.next_bool()) v ^= k.to_mask();
  return v;
}

}  // namespace

Circuit sample_full_clifford(size_t n, Rng& rng) {
  if (n > 8) throw std::out_of_range("sample_full_clifford: n > 8");
  // Sample a uniformly random symplectic basis pair by pair: each X-image
  // is uniform over the vectors commuting with everything fixed so far,
  // each Z-image uniform over those additionally anticommuting with its
  // partner.
  std::vector<uint64_t> ax(n), az(n), bx(n), bz(n);
  std::vector<BitVector> rows;
  auto rows_matrix = [&](bool with_partner, size_t i) {
    BinaryMatrix m(rows.size() + (with_partner ? 1 : 0), 2 * n);
    for (size_t r = 0; r < rows.size(); ++r) m.row(r) = rows[r];
    if (with_partner) m.row(rows.size()) = constraint_row(n, ax[i], az[i]);
    return m;
  };
  for (size_t i = 0; i < n; ++i) {
    BinaryMatrix hom = rows_matrix(false, i);
    std::vector<BitVector> ker =
        hom.rows() ? kernel_basis_f2(hom) : std::vector<BitVector>();
    if (!hom.rows()) {
      ker.reserve(2 * n);
      for (size_t j = 0; j < 2 * n; ++j) {
        BitVector e(2 * n);
        e.set(j, true);
        ker.push_back(e);
      }
    }
    uint64_t a = 0;
    do {
      a = combine_kernel(ker, rng);
    } while (a == 0);
    ax[i] = a & ((1ULL << n) - 1);
    az[i] = a >> n;

    BinaryMatrix sys = rows_matrix(true, i);
    BitVector target(sys.rows());
    target.set(sys.rows() - 1, true);
    auto part = solve_f2(sys, target);
    if (!part) throw std::logic_error("sample_full_clifford: no partner");
    uint64_t b = part->to_mask() ^ combine_kernel(kernel_basis_f2(sys), rng);
    bx[i] = b & ((1ULL << n) - 1);
    bz[i] = b >> n;

    rows.push_back(constraint_row(n, ax[i], az[i]));
    rows.push_back(constraint_row(n, bx[i], bz[i]));
  }

  // Reduce the sampled tableau to the identity with column updates,
  // recording the gates; the sampled Clifford is then the daggered gate
  // sequence followed by a uniformly random Pauli layer.
  std::vector<Gate> emitted;
  auto apply_cols = [&](const Gate& g) {
    uint64_t ma = 1ULL << g.q0, mb = 1ULL << g.q1;
    for (size_t r = 0; r < n; ++r) {
      uint64_t* xs[2] = {&ax[r], &bx[r]};
      uint64_t* zs[2] = {&az[r], &bz[r]};
      for (int t = 0; t < 2; ++t) {
        uint64_t& x = *xs[t];
        uint64_t& z = *zs[t];
        switch (g.kind) {
          case GateKind::H: {
            uint64_t xb = x & ma, zb = z & ma;
            x = (x & ~ma) | (zb ? ma : 0);
            z = (z & ~ma) | (xb ? ma : 0);
            break;
          }
          case GateKind::S:
            if (x & ma) z ^= ma;
            break;
          case GateKind::CX:
            if (x & ma) x ^= mb;
            if (z & mb) z ^= ma;
            break;
          case GateKind::CZ:
            if (x & mb) z ^= ma;
            if (x & ma) z ^= mb;
            break;
          default:
            break;
        }
      }
    }
    emitted.push_back(g);
  };

  for (size_t i = 0; i < n; ++i) {
    // First turn the Z-image row b_i into X_i.
    if (!((bx[i] >> i) & 1)) {
      // Get X support somewhere at or above qubit i, then pull it down.
      size_t j = i;
      bool found = false;
      for (j = i; j < n; ++j) {
        if ((bx[i] >> j) & 1) { found = true; break; }
      }
      if (!found) {
        for (j = i; j < n; ++j)
          if ((bz[i] >> j) & 1) break;
        if (j == n)
          throw std::logic_error("sample_full_clifford: trivial image row");
        apply_cols({GateKind::H, j});
      }
      if (j != i) apply_cols({GateKind::CX, j, i});
    }
    for (size_t j = i + 1; j < n; ++j)
      if ((bx[i] >> j) & 1) apply_cols({GateKind::CX, i, j});
    if ((bz[i] >> i) & 1) apply_cols({GateKind::S, i});
    for (size_t j = i + 1; j < n; ++j)
      if ((bz[i] >> j) & 1) apply_cols({GateKind::CZ, i, j});
    apply_cols({GateKind::H, i});  // b_i is now Z_i
    // a_i anticommutes with Z_i, so it carries X_i; fix it with gates
    // that leave Z_i untouched.
    for (size_t j = i + 1; j < n; ++j)
      if ((ax[i] >> j) & 1) apply_cols({GateKind::CX, i, j});
    for (size_t j = i + 1; j < n; ++j)
      if ((az[i] >> j) & 1) apply_cols({GateKind::CZ, i, j});
    if ((az[i] >> i) & 1) apply_cols({GateKind::S, i});
  }

  Circuit c;
  c.n = n;
  c.gates.reserve(emitted.size() + 2 * n);
  for (const Gate& g : emitted)
    c.gates.push_back(g.kind == GateKind::S ? Gate{GateKind::Sdg, g.q0} : g);
  uint64_t rx = rng.next_below(1ULL << n), rz = rng.next_below(1ULL << n);
  for (size_t j = 0; j < n; ++j) {
    if ((rx >> j) & 1) c.gates.push_back({GateKind::X, j});
    if ((rz >> j) & 1) c.gates.push_back({GateKind::Z, j});
  }
  return c;
}

double pauli_shadow_estimate(const std::vector<PauliTerm>& terms,
                             const std::vector<int>& bases, uint64_t b) {
  double est = 0;
  for (const PauliTerm& t : terms) {
    double f = t.coeff;
    for (size_t j = 0; j < bases.size() && f != 0.0; ++j) {
      bool tx = (t.pauli.x >> j) & 1, tz = (t.pauli.z >> j) & 1;
      if (!tx && !tz) continue;
      int letter = tx ? (tz ? 1 : 0) : 2;  // X=0, Y=1, Z=2
      if (letter != bases[j]) {
        f = 0;
        break;
      }
      f *= ((b >> j) & 1) ? -3.0 : 3.0;
    }
    est += f;
  }
  return est;
}

Circuit pauli_basis_circuit(const std::vector<int>& bases) {
  Circuit c;
  c.n = bases.size();
  for (size_t j = 0; j < bases.size(); ++j) {
    if (bases[j] == 0) {
      c.gates.push_back({GateKind::H, j});
    } else if (bases[j] == 1) {
      c.gates.push_back({GateKind::Sdg, j});
      c.gates.push_back({GateKind::H, j});
    }
  }
  return c;
}

SplitObservable split_observable(const DenseObservable& o, const Circuit& basis_u) {
  DenseObservable rot = conjugate_observable(o, basis_u);
  SplitObservable out{std::vector<double>(rot.dim()), DenseObservable(o.n)};
  for (size_t b = 0; b < rot.dim(); ++b) {
    out.diag[b] = rot.at(b, b).real();
    rot.at(b, b) = 0;
  }
  out.off_diag = conjugate_observable(rot, basis_u.inverse());
  return out;
}

double coherence_l1(const DenseObservable& o, const Circuit& basis_u) {
  DenseObservable rot = conjugate_observable(o, basis_u);
  double sum = 0;
  for (size_t r = 0; r < rot.dim(); ++r)
    for (size_t c = 0; c < rot.dim(); ++c)
      if (r != c) sum += std::abs(rot.at(r, c));
  return sum;
}

OffDiagonalEstimate estimate_off_diagonal(const StateVector& rho,
                                          const DenseObservable& o,
                                          const Circuit& basis_u, size_t n_diag,
                                          size_t n_shadow, Rng& rng) {
  SplitObservable split = split_observable(o, basis_u);
  StateVector rotated = apply_circuit(rho, basis_u);
  DiscreteSampler born(probabilities(rotated));
  EstimateSeries diag_series{Protocol::Mcm, rho.n, rng.seed(), {}};
  diag_series.values.reserve(n_diag);
  for (size_t s = 0; s < n_diag; ++s)
    diag_series.values.push_back(split.diag[born.sample(rng)]);
  EstimateSeries off_series = run_protocol(rho, split.off_diag, n_shadow,
                                           Protocol::Mcm, rng);
  OffDiagonalEstimate out;
  out.diag_mean = diag_series.mean();
  out.diag_variance = diag_series.variance();
  out.offdiag_mean = off_series.mean();
  out.offdiag_variance = off_series.variance();
  out.value = out.diag_mean + out.offdiag_mean;
  return out;
}

DenseObservable channel_oracle(const MubEnsemble& ens, const DenseObservable& rho) {
  if (ens.n > 4) throw std::out_of_range("channel_oracle: n > 4");
  DenseObservable out(ens.n);
  double weight = 1.0 / static_cast<double>(ens.size());
  for (size_t e = 0; e < ens.size(); ++e) {
    Circuit u = synthesize(ens, e);
    Circuit udag = u.inverse();
    DenseObservable rot = conjugate_observable(rho, u);
    StateVector basis = make_zero_state(ens.n);
    for (size_t b = 0; b < out.dim(); ++b) {
      basis.amps.assign(basis.amps.size(), 0.0);
      basis.amps[b] = 1.0;
      StateVector phi = apply_circuit(basis, udag);
      double p = rot.at(b, b).real();
      for (size_t r = 0; r < out.dim(); ++r)
        for (size_t c = 0; c < out.dim(); ++c)
          out.at(r, c) += weight * p * phi.amps[r] * std::conj(phi.amps[c]);
    }
  }
  return out;
}

}  // namespace mcm
