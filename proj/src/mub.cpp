#include "mcm/mub.hpp"

#include <stdexcept>

namespace mcm {

BinaryMatrix d_matrix(size_t n, GfElement v) {
  IrreduciblePoly p = find_irreducible(n);
  BinaryMatrix m0 = m_matrix(n, 0);
  BinaryMatrix d(n, n);
  for (size_t i = 0; i < n; ++i) {
    GfElement vi = gf_mul(v, static_cast<GfElement>(1u << i), p);
    d.row(i) = m0.mul_vec_left(BitVector::from_mask(vi, n));
  }
  return d;
}

MubEnsemble build_ensemble(size_t n) {
  if (n < 1 || n > kMaxFieldDegree)
    throw std::out_of_range("build_ensemble: n out of range");
  MubEnsemble ens;
  ens.n = n;
  ens.poly = find_irreducible(n);
  ens.elements.reserve((size_t{1} << n) + 1);
  ens.elements.push_back({BinaryMatrix(n, n), BinaryMatrix::identity(n)});
  for (GfElement v = 0; v < (1u << n); ++v)
    ens.elements.push_back({BinaryMatrix::identity(n), d_matrix(n, v)});
  return ens;
}

std::vector<PhasedPauli> stabilizer_generators(size_t n, GfElement v) {
  BinaryMatrix d = d_matrix(n, v);
  std::vector<PhasedPauli> gens;
  gens.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    PhasedPauli g;
    g.n = n;
    g.x = 1u << i;
    g.z = static_cast<uint32_t>(d.row(i).to_mask());
    g.phase = d.get(i, i) ? 3 : 0;  // (-i)^{alpha_ii}
    gens.push_back(g);
  }
  return gens;
}

std::vector<PhasedPauli> element_generators(const MubEnsemble& ens, size_t index) {
  if (index >= ens.size())
    throw std::out_of_range("element_generators: bad index");
  if (index == 0) {
    std::vector<PhasedPauli> gens;
    for (size_t i = 0; i < ens.n; ++i)
      gens.push_back({ens.n, 0, 1u << i, 0});
    return gens;
  }
  return stabilizer_generators(ens.n, static_cast<GfElement>(index - 1));
}

PhasedPauli stabilizer_product(const std::vector<PhasedPauli>& gens, uint32_t m) {
  PhasedPauli s;
  s.n = gens.empty() ? 0 : gens[0].n;
  for (size_t i = 0; i < gens.size(); ++i)
    if ((m >> i) & 1) s = s.multiply(gens[i]);
  return s;
}

std::pair<size_t, BitVector> element_for_pauli(const MubEnsemble& ens,
                                               const PhasedPauli& p) {
  if (p.is_identity())
    throw std::invalid_argument("element_for_pauli: identity input");
  size_t n = ens.n;
  if (p.x == 0) return {0, BitVector::from_mask(p.z, n)};
  // Solve D_v a = b for v, with a = x support and b = z support. Writing
  // D_v through its Hankel coefficients beta^v = B v gives the linear
  // system A v = b with A[i][k] = sum_j B[i+j][k] a_j.
  BinaryMatrix basis = beta_basis(n);
  BinaryMatrix a_mat(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (!((p.x >> j) & 1)) continue;
      a_mat.row(i).xor_with(basis.row(i + j));
    }
  }
  auto v = solve_f2(a_mat, BitVector::from_mask(p.z, n));
  if (!v) throw std::logic_error("element_for_pauli: no element found");
  return {static_cast<size_t>(v->to_mask()) + 1, BitVector::from_mask(p.x, n)};
}

}  // namespace mcm
