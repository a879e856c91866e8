#pragma once

#include <utility>
#include <vector>

#include "mcm/f2linalg.hpp"
#include "mcm/gf2n.hpp"
#include "mcm/pauli.hpp"

namespace mcm {

/// Z-tableau [C, D]: row i records the X parts (C) and Z parts (D) of the
/// i-th stabilizer generator of a measurement basis.
struct ZTableau {
  BinaryMatrix C;
  BinaryMatrix D;

  bool operator==(const ZTableau& o) const { return C == o.C && D == o.D; }
};

/// The canonical 2^n+1 element measurement ensemble. Element 0 is the
/// computational (Z) basis with tableau [0, I]; element v+1 carries label
/// v with tableau [I, D_v].
struct MubEnsemble {
  size_t n = 0;
  IrreduciblePoly poly;
  std::vector<ZTableau> elements;

  size_t size() const { return elements.size(); }
};

/// D_v: n x n Hankel matrix with row i = (v (.) 2^i) * M_n^(0).
BinaryMatrix d_matrix(size_t n, GfElement v);

MubEnsemble build_ensemble(size_t n);

/// Stabilizer generators of element v+1: g_i = (-i)^{[D_v]_{i,i}} X_i
/// prod_j Z_j^{[D_v]_{i,j}}. Each generator is Hermitian; the phase matches
/// conjugation of Z_i through the synthesized measurement circuit.
std::vector<PhasedPauli> stabilizer_generators(size_t n, GfElement v);

/// Generators of an arbitrary ensemble element (index 0 gives Z_i).
std::vector<PhasedPauli> element_generators(const MubEnsemble& ens, size_t index);

/// S_m = prod_i g_i^{m_i}, multiplied in ascending i order.
PhasedPauli stabilizer_product(const std::vector<PhasedPauli>& gens, uint32_t m);

/// The unique (element index, exponent vector m) whose stabilizer group
/// contains P up to phase. P must be non-identity.
std::pair<size_t, BitVector> element_for_pauli(const MubEnsemble& ens,
                                               const PhasedPauli& p);

}  // namespace mcm
