#include "mcm/pauli.hpp"

#include <stdexcept>

namespace mcm {

std::string PhasedPauli::to_string() const {
  // Fold the i from each Y = iXZ into the prefix so letters read naturally.
  int pre = (phase - std::popcount(x & z)) & 3;
  static const char* kPrefix[4] = {"", "i", "-", "-i"};
  std::string s = kPrefix[pre];
  for (size_t j = 0; j < n; ++j) {
    bool bx = (x >> j) & 1, bz = (z >> j) & 1;
    s += bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  return s;
}

PhasedPauli parse_pauli(const std::string& s) {
  size_t i = 0;
  int pre = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') pre += 2;
    ++i;
  }
  if (i < s.size() && s[i] == 'i') {
    pre += 1;
    ++i;
  }
  PhasedPauli p;
  for (; i < s.size(); ++i) {
    uint32_t bit = 1u << p.n;
    switch (s[i]) {
      case 'I': break;
      case 'X': p.x |= bit; break;
      case 'Z': p.z |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; pre += 1; break;  // Y = i XZ
      default: throw std::invalid_argument("parse_pauli: bad character");
    }
    ++p.n;
    if (p.n > 32) throw std::invalid_argument("parse_pauli: too many qubits");
  }
  p.phase = pre & 3;
  return p;
}

}  // namespace mcm
