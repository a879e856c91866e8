#include "mcm/biased.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

double b_u(const DenseObservable& o, const Circuit& element_circuit) {
  DenseObservable rot = conjugate_observable(traceless_part(o), element_circuit);
  double best = 0;
  for (size_t b = 0; b < rot.dim(); ++b)
    best = std::max(best, std::abs(rot.at(b, b).real()));
  return best;
}

BiasedDistribution optimal_distribution(const DenseObservable& o,
                                        const std::vector<Circuit>& circuits) {
  BiasedDistribution dist;
  dist.probs.resize(circuits.size());
  double total = 0;
  for (size_t e = 0; e < circuits.size(); ++e) {
    dist.probs[e] = b_u(o, circuits[e]);
    total += dist.probs[e];
  }
  if (total <= 0)
    throw std::invalid_argument("optimal_distribution: observable is a multiple of identity");
  for (size_t e = 0; e < circuits.size(); ++e) {
    dist.probs[e] /= total;
    if (dist.probs[e] > 0) dist.support.push_back(e);
  }
  return dist;
}

double biased_estimate(const DenseObservable& o, const Circuit& u, uint64_t b,
                       double p_u) {
  if (p_u <= 0) throw std::invalid_argument("biased_estimate: zero-probability element");
  StateVector basis = make_zero_state(o.n);
  basis.amps[0] = 0;
  basis.amps[b] = 1;
  StateVector phi = apply_circuit(basis, u.inverse());
  double tr = o.trace().real();
  double dim = static_cast<double>(o.dim());
  return (expectation(phi, o) - tr / dim) / p_u + tr / dim;
}

EstimateSeries run_biased_protocol(const StateVector& rho, const DenseObservable& o,
                                   size_t shots, Rng& rng,
                                   const BiasedDistribution* dist) {
  MubEnsemble ens = build_ensemble(rho.n);
  std::vector<Circuit> circuits = ensemble_circuits(ens);
  BiasedDistribution local;
  if (!dist) {
    local = optimal_distribution(o, circuits);
    dist = &local;
  }
  double tr = o.trace().real();
  double dim = static_cast<double>(o.dim());
  DenseObservable o0 = traceless_part(o);
  // Per-element rotated diagonals and Born distributions, support only.
  std::vector<std::vector<double>> diag(circuits.size());
  std::vector<DiscreteSampler> born;
  std::vector<size_t> born_index(circuits.size(), 0);
  for (size_t e : dist->support) {
    DenseObservable rot = conjugate_observable(o0, circuits[e]);
    diag[e].resize(rot.dim());
    for (size_t b = 0; b < rot.dim(); ++b) diag[e][b] = rot.at(b, b).real();
    born_index[e] = born.size();
    born.emplace_back(probabilities(apply_circuit(rho, circuits[e])));
  }
  std::vector<double> support_probs;
  for (size_t e : dist->support) support_probs.push_back(dist->probs[e]);
  DiscreteSampler element_sampler(support_probs);
  EstimateSeries series{Protocol::Biased, rho.n, rng.seed(), {}};
  series.values.reserve(shots);
  for (size_t s = 0; s < shots; ++s) {
    size_t e = dist->support[element_sampler.sample(rng)];
    size_t b = born[born_index[e]].sample(rng);
    series.values.push_back(diag[e][b] / dist->probs[e] + tr / dim);
  }
  return series;
}

double stabilizer_norm(const DenseObservable& a) {
  if (a.n > 8) throw std::out_of_range("stabilizer_norm: n > 8");
  double sum = 0;
  for (uint32_t x = 0; x < a.dim(); ++x)
    for (uint32_t z = 0; z < a.dim(); ++z)
      sum += std::abs(pauli_trace(a, x, z));
  return sum / static_cast<double>(a.dim());
}

BiasedDistribution pauli_sum_distribution(const PauliSumObservable& o,
                                          const MubEnsemble& ens) {
  if (o.terms.empty())
    throw std::invalid_argument("pauli_sum_distribution: empty term list");
  BiasedDistribution dist;
  dist.probs.assign(ens.size(), 0.0);
  double total = 0;
  for (const PauliTerm& t : o.terms) {
    if (t.pauli.is_identity())
      throw std::invalid_argument("pauli_sum_distribution: identity term");
    auto [e, m] = element_for_pauli(ens, t.pauli);
    dist.probs[e] += std::abs(t.coeff);
    total += std::abs(t.coeff);
  }
  for (size_t e = 0; e < dist.probs.size(); ++e) {
    dist.probs[e] /= total;
    if (dist.probs[e] > 0) dist.support.push_back(e);
  }
  return dist;
}

namespace {

Circuit compose(const Circuit& first, const Circuit& second) {
  Circuit c;
  c.n = first.n;
  c.gates = first.gates;
  c.gates.insert(c.gates.end(), second.gates.begin(), second.gates.end());
  return c;
}

size_t rank_of_x_block(const Circuit& u, const Circuit& v) {
  // Tableau of U V†: gate list of V† then U.
  Circuit uv = compose(v.inverse(), u);
  return rank_f2(ztableau_of(uv).tableau.C);
}

}  // namespace

std::pair<size_t, double> stabilizer_sampler(const StabilizerObservable& o,
                                             const MubEnsemble& ens,
                                             const std::vector<Circuit>& circuits,
                                             Rng& rng) {
  size_t n = ens.n;
  uint32_t m = static_cast<uint32_t>(rng.next_below((1ULL << n) - 1)) + 1;
  // The sampled stabilizer of O = V†|0><0|V is V† Z^m V.
  PhasedPauli zm{n, 0, m, 0};
  PhasedPauli s = conjugate_pauli(o.v, zm, ConjugateDirection::Forward);
  auto [e, mvec] = element_for_pauli(ens, s);
  size_t r = rank_of_x_block(circuits[e], o.v);
  double inv2n = std::ldexp(1.0, -static_cast<int>(n));
  double p = (std::ldexp(1.0, -static_cast<int>(r)) - inv2n) / (1.0 - inv2n);
  return {e, p};
}

AlphaProfile alpha_profile(const StabilizerObservable& o, const MubEnsemble& ens,
                           const std::vector<Circuit>& circuits, size_t index) {
  size_t n = ens.n;
  size_t r = rank_of_x_block(circuits[index], o.v);
  // alpha_b = |<b| U V† |0>|^2.
  StateVector phi = apply_circuit(make_zero_state(n),
                                  compose(o.v.inverse(), circuits[index]));
  double expected = std::ldexp(1.0, -static_cast<int>(r));
  size_t hits = 0;
  double max_alpha = 0;
  for (const Complex& a : phi.amps) {
    double w = std::norm(a);
    max_alpha = std::max(max_alpha, w);
    if (std::abs(w - expected) < 1e-9) {
      ++hits;
    } else if (w > 1e-9) {
      throw std::logic_error("alpha_profile: unexpected overlap value");
    }
  }
  if (hits != (size_t{1} << r))
    throw std::logic_error("alpha_profile: wrong overlap multiplicity");
  return {r, max_alpha};
}

}  // namespace mcm
