#include "mcm/statesim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcm {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex ipow(int k) {
  static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k & 3];
}

void check_qubits(size_t n) {
  if (n == 0 || n > kMaxSimQubits)
    throw std::out_of_range("statesim: qubit count out of range");
}

// Apply a single gate to one length-2^n complex array (a state or one
// matrix column viewed with a stride of 1).
void apply_gate_kernel(size_t n, Complex* a, const Gate& g) {
  size_t dim = size_t{1} << n;
  size_t ma = size_t{1} << g.q0;
  switch (g.kind) {
    case GateKind::H: {
      const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
      for (size_t i = 0; i < dim; ++i) {
        if (i & ma) continue;
        Complex a0 = a[i], a1 = a[i | ma];
        a[i] = (a0 + a1) * inv_sqrt2;
        a[i | ma] = (a0 - a1) * inv_sqrt2;
      }
      break;
    }
    case GateKind::S:
      for (size_t i = 0; i < dim; ++i)
        if (i & ma) a[i] *= kI;
      break;
    case GateKind::Sdg:
      for (size_t i = 0; i < dim; ++i)
        if (i & ma) a[i] *= -kI;
      break;
    case GateKind::X:
      for (size_t i = 0; i < dim; ++i)
        if (!(i & ma)) std::swap(a[i], a[i | ma]);
      break;
    case GateKind::Y:
      for (size_t i = 0; i < dim; ++i) {
        if (i & ma) continue;
        Complex a0 = a[i], a1 = a[i | ma];
        a[i] = -kI * a1;
        a[i | ma] = kI * a0;
      }
      break;
    case GateKind::Z:
      for (size_t i = 0; i < dim; ++i)
        if (i & ma) a[i] = -a[i];
      break;
    case GateKind::CZ: {
      size_t mb = size_t{1} << g.q1;
      for (size_t i = 0; i < dim; ++i)
        if ((i & ma) && (i & mb)) a[i] = -a[i];
      break;
    }
    case GateKind::CX: {
      size_t mb = size_t{1} << g.q1;
      for (size_t i = 0; i < dim; ++i)
        if ((i & ma) && !(i & mb)) std::swap(a[i], a[i | mb]);
      break;
    }
  }
}

}  // namespace

StateVector::StateVector(size_t n_qubits) : n(n_qubits) {
  check_qubits(n);
  amps.assign(size_t{1} << n, 0.0);
}

double StateVector::norm() const {
  double s = 0;
  for (const Complex& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

DenseObservable::DenseObservable(size_t n_qubits) : n(n_qubits) {
  check_qubits(n);
  mat.assign(size_t{1} << (2 * n), 0.0);
}

Complex DenseObservable::trace() const {
  Complex t = 0;
  for (size_t i = 0; i < dim(); ++i) t += at(i, i);
  return t;
}

bool DenseObservable::is_hermitian(double tol) const {
  for (size_t r = 0; r < dim(); ++r)
    for (size_t c = r; c < dim(); ++c)
      if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
  return true;
}

void apply_gate(StateVector& s, const Gate& g) {
  apply_gate_kernel(s.n, s.amps.data(), g);
}

StateVector apply_circuit(const StateVector& s, const Circuit& c) {
  if (s.n != c.n) throw std::invalid_argument("apply_circuit: size mismatch");
  StateVector out = s;
  for (const Gate& g : c.gates) apply_gate(out, g);
  return out;
}

DenseObservable conjugate_observable(const DenseObservable& o, const Circuit& c) {
  if (o.n != c.n) throw std::invalid_argument("conjugate_observable: size mismatch");
  size_t dim = o.dim();
  // Column-major scratch so each column is contiguous for the kernels.
  std::vector<Complex> col(dim * dim);
  auto apply_to_columns = [&](std::vector<Complex>& m) {
    for (size_t cidx = 0; cidx < dim; ++cidx)
      for (const Gate& g : c.gates)
        apply_gate_kernel(o.n, m.data() + cidx * dim, g);
  };
  // col = U O (columns of O are contiguous after transpose-copy).
  for (size_t r = 0; r < dim; ++r)
    for (size_t cc = 0; cc < dim; ++cc) col[cc * dim + r] = o.at(r, cc);
  apply_to_columns(col);
  // Conjugate-transpose: (U O)† = O U† since O is Hermitian.
  std::vector<Complex> col2(dim * dim);
  for (size_t r = 0; r < dim; ++r)
    for (size_t cc = 0; cc < dim; ++cc)
      col2[cc * dim + r] = std::conj(col[r * dim + cc]);
  apply_to_columns(col2);
  DenseObservable out(o.n);
  for (size_t r = 0; r < dim; ++r)
    for (size_t cc = 0; cc < dim; ++cc) out.at(r, cc) = col2[cc * dim + r];
  return out;
}

BitVector sample_bitstring(const StateVector& s, Rng& rng) {
  double u = rng.next_double();
  double acc = 0;
  size_t idx = s.amps.size() - 1;
  for (size_t i = 0; i < s.amps.size(); ++i) {
    acc += std::norm(s.amps[i]);
    if (u < acc) {
      idx = i;
      break;
    }
  }
  return BitVector::from_mask(idx, s.n);
}

std::vector<double> probabilities(const StateVector& s) {
  std::vector<double> p(s.amps.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amps[i]);
  return p;
}

double expectation(const StateVector& s, const DenseObservable& o) {
  if (s.n != o.n) throw std::invalid_argument("expectation: size mismatch");
  Complex e = 0;
  for (size_t r = 0; r < o.dim(); ++r) {
    Complex row = 0;
    for (size_t c = 0; c < o.dim(); ++c) row += o.at(r, c) * s.amps[c];
    e += std::conj(s.amps[r]) * row;
  }
  if (std::abs(e.imag()) > 1e-9)
    throw std::logic_error("expectation: non-real value (non-Hermitian input?)");
  return e.real();
}

double diagonal_entry(const DenseObservable& o, uint64_t b) {
  return o.at(b, b).real();
}

StateVector make_zero_state(size_t n) {
  StateVector s(n);
  s.amps[0] = 1.0;
  return s;
}

StateVector make_ghz_state(size_t n) {
  return make_ghz_theta_state(n, std::numbers::pi / 2);
}

StateVector make_ghz_theta_state(size_t n, double theta) {
  StateVector s(n);
  double c = std::cos(theta / 2), d = std::sin(theta / 2);
  double norm = std::sqrt(c * c + d * d);
  s.amps[0] = c / norm;
  s.amps[s.amps.size() - 1] = d / norm;
  return s;
}

StateVector make_haar_state(size_t n, Rng& rng) {
  StateVector s(n);
  for (Complex& a : s.amps) a = Complex(rng.next_gaussian(), rng.next_gaussian());
  double norm = s.norm();
  for (Complex& a : s.amps) a /= norm;
  return s;
}

StateVector make_pure_state(size_t n, const std::vector<Complex>& amps) {
  StateVector s(n);
  if (amps.size() != s.amps.size())
    throw std::invalid_argument("make_pure_state: wrong amplitude count");
  s.amps = amps;
  double norm = s.norm();
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::invalid_argument("make_pure_state: not normalized");
  return s;
}

DenseObservable identity_observable(size_t n) {
  DenseObservable o(n);
  for (size_t i = 0; i < o.dim(); ++i) o.at(i, i) = 1.0;
  return o;
}

DenseObservable pauli_to_dense(const PhasedPauli& p) {
  DenseObservable o(p.n);
  Complex ph = ipow(p.phase);
  for (size_t k = 0; k < o.dim(); ++k) {
    double sign = (std::popcount(static_cast<uint32_t>(k) & p.z) & 1) ? -1.0 : 1.0;
    o.at(k ^ p.x, k) = ph * sign;
  }
  return o;
}

DenseObservable projector(const StateVector& s) {
  DenseObservable o(s.n);
  for (size_t r = 0; r < o.dim(); ++r)
    for (size_t c = 0; c < o.dim(); ++c)
      o.at(r, c) = s.amps[r] * std::conj(s.amps[c]);
  return o;
}

DenseObservable ghz_offdiag_observable(size_t n) {
  DenseObservable o(n);
  size_t last = o.dim() - 1;
  o.at(0, last) = 0.5;
  o.at(last, 0) = 0.5;
  return o;
}

DenseObservable corner_observable(size_t n, double a) {
  DenseObservable o(n);
  size_t last = o.dim() - 1;
  o.at(0, last) = a;
  o.at(last, 0) = a;
  o.at(0, 0) = 1.0 - a;
  o.at(last, last) = 1.0 - a;
  return o;
}

DenseObservable xz_product_observable(size_t n, size_t k, double theta) {
  if (k > n) throw std::invalid_argument("xz_product_observable: k > n");
  double c = std::cos(theta), s = std::sin(theta);
  DenseObservable o(n);
  // Product structure: <r|O|q> factorizes per qubit.
  for (size_t r = 0; r < o.dim(); ++r) {
    for (size_t q = 0; q < o.dim(); ++q) {
      if ((r >> k) != (q >> k)) continue;  // identity factor on qubits >= k
      double val = 1.0;
      for (size_t j = 0; j < k; ++j) {
        bool rb = (r >> j) & 1, qb = (q >> j) & 1;
        // cos Z + sin X has entries [[c, s], [s, -c]].
        val *= rb == qb ? (rb ? -c : c) : s;
      }
      o.at(r, q) = val;
    }
  }
  return o;
}

DenseObservable traceless_part(const DenseObservable& o) {
  DenseObservable out = o;
  Complex shift = o.trace() / static_cast<double>(o.dim());
  for (size_t i = 0; i < o.dim(); ++i) out.at(i, i) -= shift;
  return out;
}

DenseObservable add(const DenseObservable& a, const DenseObservable& b, Complex bscale) {
  if (a.n != b.n) throw std::invalid_argument("add: size mismatch");
  DenseObservable out = a;
  for (size_t i = 0; i < out.mat.size(); ++i) out.mat[i] += bscale * b.mat[i];
  return out;
}

Complex pauli_trace(const DenseObservable& a, uint32_t x, uint32_t z) {
  Complex t = 0;
  for (size_t l = 0; l < a.dim(); ++l) {
    double sign = (std::popcount(static_cast<uint32_t>(l) & z) & 1) ? -1.0 : 1.0;
    t += sign * a.at(l, l ^ x);
  }
  return ipow(std::popcount(x & z)) * t;
}

std::vector<PauliTerm> pauli_decompose(const DenseObservable& a, double tol) {
  std::vector<PauliTerm> terms;
  double scale = 1.0 / static_cast<double>(a.dim());
  for (uint32_t x = 0; x < a.dim(); ++x) {
    for (uint32_t z = 0; z < a.dim(); ++z) {
      Complex t = pauli_trace(a, x, z) * scale;
      if (std::abs(t.imag()) > 1e-9)
        throw std::logic_error("pauli_decompose: non-Hermitian input");
      if (std::abs(t.real()) <= tol) continue;
      PhasedPauli p{a.n, x, z, std::popcount(x & z) & 3};
      terms.push_back({t.real(), p});
    }
  }
  return terms;
}

DiscreteSampler::DiscreteSampler(const std::vector<double>& weights) {
  cdf_.reserve(weights.size());
  double acc = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("DiscreteSampler: negative weight");
    acc += w;
    cdf_.push_back(acc);
  }
  if (acc <= 0) throw std::invalid_argument("DiscreteSampler: zero total weight");
}

size_t DiscreteSampler::sample(Rng& rng) const {
  double u = rng.next_double() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<size_t>(it - cdf_.begin());
}

}  // namespace mcm
