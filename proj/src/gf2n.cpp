#include "mcm/gf2n.hpp"

#include <bit>
#include <stdexcept>

namespace mcm {

namespace {

size_t poly_degree(uint64_t p) {
  return 63 - std::countl_zero(p);
}

// Remainder of polynomial division a mod m over F2.
uint64_t poly_mod(uint64_t a, uint64_t m) {
  size_t dm = poly_degree(m);
  while (a >= (1ULL << dm)) {
    a ^= m << (poly_degree(a) - dm);
  }
  return a;
}

bool is_irreducible(uint64_t p, size_t n) {
  // Trial division by every monic polynomial of degree 1..n/2.
  for (size_t d = 1; 2 * d <= n; ++d) {
    for (uint64_t q = (1ULL << d); q < (2ULL << d); ++q) {
      if (poly_mod(p, q) == 0) return false;
    }
  }
  return true;
}

}  // namespace

IrreduciblePoly find_irreducible(size_t n) {
  if (n < 1 || n > kMaxFieldDegree)
    throw std::out_of_range("find_irreducible: degree out of range");
  // Monic with constant term 1 (otherwise divisible by x).
  for (uint64_t p = (1ULL << n) | 1; p < (2ULL << n); p += 2) {
    if (is_irreducible(p, n))
      return IrreduciblePoly{n, static_cast<uint32_t>(p)};
  }
  throw std::logic_error("find_irreducible: none found");  // unreachable
}

GfElement gf_mul(GfElement a, GfElement b, const IrreduciblePoly& p) {
  uint64_t prod = 0;
  uint64_t aa = a;
  for (uint32_t bb = b; bb; bb >>= 1, aa <<= 1)
    if (bb & 1) prod ^= aa;
  return static_cast<GfElement>(prod ? poly_mod(prod, p.bits) : 0);
}

BinaryMatrix gamma_matrix(size_t n) {
  IrreduciblePoly p = find_irreducible(n);
  BinaryMatrix g(2 * n - 1, n);
  uint64_t pw = 1;  // 2^k mod P_n
  for (size_t k = 0; k < 2 * n - 1; ++k) {
    for (size_t j = 0; j < n; ++j) g.set(k, j, (pw >> j) & 1);
    pw <<= 1;
    if (pw >> n) pw ^= p.bits;
  }
  return g;
}

BinaryMatrix m_matrix(size_t n, size_t j) {
  if (j >= n) throw std::out_of_range("m_matrix: column index out of range");
  BinaryMatrix gamma = gamma_matrix(n);
  BinaryMatrix m(n, n);
  for (size_t p = 0; p < n; ++p)
    for (size_t q = 0; q < n; ++q) m.set(p, q, gamma.get(p + q, j));
  return m;
}

BinaryMatrix m_n_matrix(size_t n) {
  return gamma_matrix(n).mul(m_matrix(n, 0));
}

}  // namespace mcm
