#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcm/circuit.hpp"
#include "mcm/mub.hpp"
#include "mcm/rng.hpp"
#include "mcm/statesim.hpp"

namespace mcm {

enum class Protocol { Mcm, FullClifford, Pauli, Biased };

const char* protocol_name(Protocol p);
Protocol parse_protocol(const std::string& s);

/// One measurement record: which unitary was drawn and what outcome the
/// computational-basis readout produced.
struct Snapshot {
  Protocol protocol;
  size_t element = 0;  // ensemble index (MCM/biased)
  uint64_t outcome = 0;
};

struct EstimateSeries {
  Protocol protocol;
  size_t n = 0;
  uint64_t seed = 0;
  std::vector<double> values;

  double mean() const;
  /// Unbiased sample variance of the single-shot values.
  double variance() const;
};

/// Uniform draw over all 2^n+1 ensemble indices.
size_t sample_mcm_element(const MubEnsemble& ens, Rng& rng);

/// Single-shot estimator (2^n+1) <b|U O U†|b> - tr(O).
double mcm_estimate(const DenseObservable& o, const Circuit& u, uint64_t b);

/// All measurement circuits of the ensemble, index-aligned.
std::vector<Circuit> ensemble_circuits(const MubEnsemble& ens);

/// N single-shot estimates of tr(rho O) under the chosen protocol
/// (uniform MCM, uniform Clifford group, or random per-qubit Pauli bases).
EstimateSeries run_protocol(const StateVector& rho, const DenseObservable& o,
                            size_t shots, Protocol protocol, Rng& rng);

/// Exactly uniform over the n-qubit Clifford group modulo global phase
/// (symplectic part plus a uniformly random Pauli layer).
Circuit sample_full_clifford(size_t n, Rng& rng);

/// Single-shot Pauli-shadow estimator for an observable in Pauli-sum form.
/// bases[j] in {0,1,2} selects X/Y/Z measurement on qubit j.
double pauli_shadow_estimate(const std::vector<PauliTerm>& terms,
                             const std::vector<int>& bases, uint64_t b);

/// Basis-change circuit mapping the chosen per-qubit Pauli bases onto Z
/// readout (X: H, Y: Sdg then H, Z: none).
Circuit pauli_basis_circuit(const std::vector<int>& bases);

/// O written in the measurement basis of basisU: the diagonal entries
/// d_b = <b|U O U†|b> and the off-diagonal remainder rotated back, with
/// O = sum_b d_b Phi_{U,b} + O_F exactly.
struct SplitObservable {
  std::vector<double> diag;
  DenseObservable off_diag;
};
SplitObservable split_observable(const DenseObservable& o, const Circuit& basis_u);

/// Sum of absolute off-diagonal entries of O in the basis of basisU.
double coherence_l1(const DenseObservable& o, const Circuit& basis_u);

struct OffDiagonalEstimate {
  double value = 0;
  double diag_mean = 0, diag_variance = 0;
  double offdiag_mean = 0, offdiag_variance = 0;
};

/// Diagonal part by direct measurement in basisU (n_diag shots), O_F part
/// by uniform MCM shadows (n_shadow shots).
OffDiagonalEstimate estimate_off_diagonal(const StateVector& rho,
                                          const DenseObservable& o,
                                          const Circuit& basis_u, size_t n_diag,
                                          size_t n_shadow, Rng& rng);

/// Exact measurement channel sum_{U,b} (1/|E|) tr(rho Phi_{U,b}) Phi_{U,b};
/// equals (rho + I) / (2^n + 1). Dense enumeration, small n only.
DenseObservable channel_oracle(const MubEnsemble& ens, const DenseObservable& rho);

}  // namespace mcm
