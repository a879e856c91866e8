#pragma once

#include <complex>
#include <vector>

#include "mcm/circuit.hpp"
#include "mcm/f2linalg.hpp"
#include "mcm/pauli.hpp"
#include "mcm/rng.hpp"

namespace mcm {

using Complex = std::complex<double>;

constexpr size_t kMaxSimQubits = 14;

/// Dense n-qubit state, little-endian basis indexing (bit i of the basis
/// index is qubit i).
struct StateVector {
  size_t n = 0;
  std::vector<Complex> amps;

  explicit StateVector(size_t n_qubits);
  double norm() const;
};

/// Dense 2^n x 2^n Hermitian operator, row-major.
struct DenseObservable {
  size_t n = 0;
  std::vector<Complex> mat;

  explicit DenseObservable(size_t n_qubits);
  size_t dim() const { return size_t{1} << n; }
  Complex& at(size_t r, size_t c) { return mat[(r << n) + c]; }
  Complex at(size_t r, size_t c) const { return mat[(r << n) + c]; }
  Complex trace() const;
  bool is_hermitian(double tol = 1e-10) const;
};

void apply_gate(StateVector& s, const Gate& g);
StateVector apply_circuit(const StateVector& s, const Circuit& c);

/// U O U† for the unitary U of the circuit, computed by applying the gate
/// kernels to matrix columns (O must be Hermitian).
DenseObservable conjugate_observable(const DenseObservable& o, const Circuit& c);

BitVector sample_bitstring(const StateVector& s, Rng& rng);

/// Born-rule probabilities |amp|^2.
std::vector<double> probabilities(const StateVector& s);

double expectation(const StateVector& s, const DenseObservable& o);

/// <s|O|s> restricted to a basis state: O_{b,b}.
double diagonal_entry(const DenseObservable& o, uint64_t b);

StateVector make_zero_state(size_t n);
StateVector make_ghz_state(size_t n);
/// cos(theta/2)|0..0> + sin(theta/2)|1..1>, normalized.
StateVector make_ghz_theta_state(size_t n, double theta);
StateVector make_haar_state(size_t n, Rng& rng);
StateVector make_pure_state(size_t n, const std::vector<Complex>& amps);

DenseObservable identity_observable(size_t n);
DenseObservable pauli_to_dense(const PhasedPauli& p);
/// |psi><psi|.
DenseObservable projector(const StateVector& s);
/// ((|0..0><1..1|) + h.c.) / 2.
DenseObservable ghz_offdiag_observable(size_t n);
/// a(|0..0><1..1| + h.c.) + (1-a)(|0..0><0..0| + |1..1><1..1|).
DenseObservable corner_observable(size_t n, double a);
/// [cos(theta) Z + sin(theta) X]^{tensor k} tensor I^{n-k}.
DenseObservable xz_product_observable(size_t n, size_t k, double theta);
/// O - tr(O) I / 2^n.
DenseObservable traceless_part(const DenseObservable& o);

DenseObservable add(const DenseObservable& a, const DenseObservable& b, Complex bscale = 1.0);

/// tr(W(x,z) A) for the Hermitian Pauli W(x,z) = i^{x.z} X^x Z^z;
/// O(2^n) time.
Complex pauli_trace(const DenseObservable& a, uint32_t x, uint32_t z);

/// Real Pauli-sum decomposition A = sum c_{x,z} W(x,z) / with identity
/// included; coefficients are tr(WA)/2^n. Cost 8^n — small n only.
struct PauliTerm {
  double coeff;
  PhasedPauli pauli;  // Hermitian representative
};
std::vector<PauliTerm> pauli_decompose(const DenseObservable& a, double tol = 1e-12);

/// Sample an index from nonnegative weights via the cumulative sums.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& weights);
  size_t sample(Rng& rng) const;
  double total() const { return cdf_.empty() ? 0.0 : cdf_.back(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace mcm
