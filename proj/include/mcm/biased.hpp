#pragma once

#include <vector>

#include "mcm/shadow.hpp"

namespace mcm {

/// Element-dependent sampling distribution p_U over the ensemble.
struct BiasedDistribution {
  std::vector<double> probs;    // length 2^n + 1, sums to 1
  std::vector<size_t> support;  // indices with p_U > 0
};

struct PauliSumObservable {
  size_t n = 0;
  std::vector<PauliTerm> terms;  // non-identity Hermitian Paulis
  double trace = 0;              // tr(O), carried separately
};

/// Observable of the form O = V†|0..0><0..0|V for a Clifford circuit V.
struct StabilizerObservable {
  Circuit v;
};

/// B_U = max_b |<b| U O_0 U† |b>| with O_0 the traceless part of O.
double b_u(const DenseObservable& o, const Circuit& element_circuit);

/// p_U proportional to B_U over the whole ensemble.
BiasedDistribution optimal_distribution(const DenseObservable& o,
                                        const std::vector<Circuit>& circuits);

/// Single-shot biased estimator <b|U O_0 U†|b> / p_U + tr(O) / 2^n.
double biased_estimate(const DenseObservable& o, const Circuit& u, uint64_t b,
                       double p_u);

/// N single-shot biased-MCM estimates; the distribution defaults to the
/// optimal one when not supplied.
EstimateSeries run_biased_protocol(const StateVector& rho, const DenseObservable& o,
                                   size_t shots, Rng& rng,
                                   const BiasedDistribution* dist = nullptr);

/// D(A) = 2^-n sum over all Pauli strings of |tr(P A)|.
double stabilizer_norm(const DenseObservable& a);

/// p_U from the Pauli-sum structure: each element's weight is the total
/// |alpha| of the terms whose stabilizer group it owns.
BiasedDistribution pauli_sum_distribution(const PauliSumObservable& o,
                                          const MubEnsemble& ens);

/// One biased draw for a stabilizer observable without enumerating B_U:
/// a uniformly random non-identity stabilizer of O is mapped to its
/// ensemble element; p_U follows from r_U = rank of the X block of the
/// tableau of U V†.
std::pair<size_t, double> stabilizer_sampler(const StabilizerObservable& o,
                                             const MubEnsemble& ens,
                                             const std::vector<Circuit>& circuits,
                                             Rng& rng);

/// r_U for one element together with the overlap profile
/// alpha_b = |<b|U V†|0>|^2: exactly 2^{r_U} entries equal 2^{-r_U}, the
/// rest vanish. Throws if the profile does not match.
struct AlphaProfile {
  size_t r_u = 0;
  double max_alpha = 0;
};
AlphaProfile alpha_profile(const StabilizerObservable& o, const MubEnsemble& ens,
                           const std::vector<Circuit>& circuits, size_t index);

}  // namespace mcm
