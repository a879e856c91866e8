#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcm/mub.hpp"
#include "mcm/pauli.hpp"

namespace mcm {

enum class GateKind { H, S, Sdg, CZ, CX, X, Y, Z };

bool gate_is_two_qubit(GateKind k);
const char* gate_name(GateKind k);

struct Gate {
  GateKind kind;
  size_t q0 = 0;
  size_t q1 = 0;  // used by two-qubit gates only

  bool operator==(const Gate& o) const {
    return kind == o.kind && q0 == o.q0 && q1 == o.q1;
  }
};

struct Circuit {
  size_t n = 0;
  std::vector<Gate> gates;

  /// Reversed gate list with each gate daggered.
  Circuit inverse() const;

  bool operator==(const Circuit& o) const { return n == o.n && gates == o.gates; }
};

/// Apply the phase-free tableau update of one gate (H, S/Sdg, or CZ).
ZTableau apply_gate_to_ztableau(const ZTableau& t, const Gate& g);

/// Gates of module M_k: an S on qubit k/2 when k is even, plus the CZ
/// pairs sweeping inward along anti-diagonal k.
std::vector<Gate> module_gates(size_t n, size_t k);

/// Measurement circuit for an ensemble element: empty for index 0, else
/// the fired modules of D_v followed by a full H layer. Replaying the
/// tableau updates maps [I, D_v] to [0, I].
Circuit synthesize(const MubEnsemble& ens, size_t index);

/// Depth under greedy as-soon-as-possible layering on all-to-all
/// connectivity.
size_t circuit_depth(const Circuit& c);

enum class ConjugateDirection { Forward, Inverse };

/// U†PU (forward) or UPU† (inverse) with exact phase.
PhasedPauli conjugate_pauli(const Circuit& c, const PhasedPauli& p,
                            ConjugateDirection dir);

/// Z-tableau of the circuit plus per-row sign bits: row i is U†Z_iU split
/// into X parts, Z parts, and a sign (phase exponent of i, mod 4).
struct SignedZTableau {
  ZTableau tableau;
  std::vector<int> phases;  // exponent of i per row
};
SignedZTableau ztableau_of(const Circuit& c);

/// Text format: optional `# ...` comment lines, then one gate per line
/// (`H 0`, `S 2`, `CZ 0 3`).
std::string circuit_to_text(const Circuit& c, const std::string& header = "");
Circuit parse_circuit_text(const std::string& text);

}  // namespace mcm
