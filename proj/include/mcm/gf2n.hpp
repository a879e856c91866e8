#pragma once

#include <cstdint>

#include "mcm/f2linalg.hpp"

namespace mcm {

/// Field element of GF(2^n): bit i is the coefficient of 2^i.
using GfElement = uint32_t;

constexpr size_t kMaxFieldDegree = 16;

/// Monic irreducible polynomial over F2, encoded as an (n+1)-bit integer
/// with the leading and constant bits set.
struct IrreduciblePoly {
  size_t n = 0;
  uint32_t bits = 0;
};

/// The lexicographically smallest (as integer encoding) monic irreducible
/// polynomial of degree n. Deterministic; 1 <= n <= 16.
IrreduciblePoly find_irreducible(size_t n);

/// Carry-less product of a and b reduced mod p.
GfElement gf_mul(GfElement a, GfElement b, const IrreduciblePoly& p);

/// The (2n-1) x n matrix whose row k is the bit vector of 2^k mod P_n.
/// Rows 0..n-1 form the identity.
BinaryMatrix gamma_matrix(size_t n);

/// The symmetric n x n matrix M_n^(j) with [M]_{p,q} = Gamma_{p+q, j},
/// satisfying [a (.) b]_j = a M b^T over F2.
BinaryMatrix m_matrix(size_t n, size_t j);

/// M_n = Gamma_n * M_n^(0), a (2n-1) x n matrix whose n consecutive-row
/// windows are the Hankel generators D_i.
BinaryMatrix m_n_matrix(size_t n);

}  // namespace mcm
