#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "mcm/f2linalg.hpp"

namespace mcm {

/// n-qubit Pauli operator i^phase * prod_j X_j^{x_j} Z_j^{z_j},
/// with phase an exponent of i taken mod 4.
struct PhasedPauli {
  size_t n = 0;
  uint32_t x = 0;  // bit j set iff X on qubit j
  uint32_t z = 0;  // bit j set iff Z on qubit j
  int phase = 0;   // exponent of i, mod 4

  bool is_identity() const { return x == 0 && z == 0; }

  /// Hermitian iff i^phase cancels the i per qubit carrying both X and Z.
  bool is_hermitian() const {
    return ((phase & 1) ^ (std::popcount(x & z) & 1)) == 0;
  }

  PhasedPauli multiply(const PhasedPauli& o) const {
    PhasedPauli r;
    r.n = n;
    r.x = x ^ o.x;
    r.z = z ^ o.z;
    // Moving o's X part past this operator's Z part gives (-1) per overlap.
    r.phase = (phase + o.phase + 2 * std::popcount(z & o.x)) & 3;
    return r;
  }

  bool operator==(const PhasedPauli& o) const {
    return n == o.n && x == o.x && z == o.z && ((phase - o.phase) & 3) == 0;
  }

  /// Letters I/X/Y/Z per qubit with a sign prefix, e.g. "-YIZ".
  std::string to_string() const;
};

/// Parse a Pauli string such as "XZI" or "-iYZ" (qubit 0 first).
PhasedPauli parse_pauli(const std::string& s);

}  // namespace mcm
