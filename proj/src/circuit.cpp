#include "mcm/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mcm {

bool gate_is_two_qubit(GateKind k) {
  return k == GateKind::CZ || k == GateKind::CX;
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::CZ: return "CZ";
    case GateKind::CX: return "CX";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
  }
  return "?";
}

Circuit Circuit::inverse() const {
  Circuit inv;
  inv.n = n;
  inv.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::S) g.kind = GateKind::Sdg;
    else if (g.kind == GateKind::Sdg) g.kind = GateKind::S;
    inv.gates.push_back(g);
  }
  return inv;
}

ZTableau apply_gate_to_ztableau(const ZTableau& t, const Gate& g) {
  ZTableau r = t;
  size_t n = t.C.rows();
  switch (g.kind) {
    case GateKind::H:
      for (size_t i = 0; i < n; ++i) {
        bool c = r.C.get(i, g.q0), d = r.D.get(i, g.q0);
        r.C.set(i, g.q0, d);
        r.D.set(i, g.q0, c);
      }
      break;
    case GateKind::S:
    case GateKind::Sdg:
      for (size_t i = 0; i < n; ++i)
        if (r.C.get(i, g.q0)) r.D.set(i, g.q0, !r.D.get(i, g.q0));
      break;
    case GateKind::CZ:
      for (size_t i = 0; i < n; ++i) {
        bool ca = r.C.get(i, g.q0), cb = r.C.get(i, g.q1);
        if (cb) r.D.set(i, g.q0, !r.D.get(i, g.q0));
        if (ca) r.D.set(i, g.q1, !r.D.get(i, g.q1));
      }
      break;
    default:
      throw std::invalid_argument("apply_gate_to_ztableau: unsupported gate");
  }
  return r;
}

std::vector<Gate> module_gates(size_t n, size_t k) {
  if (k > 2 * n - 2) throw std::out_of_range("module_gates: k out of range");
  std::vector<Gate> gates;
  if (k % 2 == 0) gates.push_back({GateKind::S, k / 2});
  size_t p = (k < n - 1 || n == 1) ? 0 : k - n + 1;
  size_t q = (k < n - 1 || n == 1) ? k : n - 1;
  while (p < q) {
    gates.push_back({GateKind::CZ, p, q});
    ++p;
    --q;
  }
  return gates;
}

Circuit synthesize(const MubEnsemble& ens, size_t index) {
  if (index >= ens.size()) throw std::out_of_range("synthesize: bad index");
  Circuit c;
  c.n = ens.n;
  if (index == 0) return c;
  GfElement v = static_cast<GfElement>(index - 1);
  BitVector beta = beta_basis(ens.n).mul_vec(BitVector::from_mask(v, ens.n));
  // Emit modules paired as (t, t+n): the two act on disjoint qubits, so
  // greedy layering packs each pair into one layer and the whole S/CZ
  // stage into at most n layers. All these gates commute, so the order is
  // physically irrelevant but keeps the depth bound tight.
  auto emit = [&](size_t k) {
    if (k >= 2 * ens.n - 1 || !beta.get(k)) return;
    auto mod = module_gates(ens.n, k);
    c.gates.insert(c.gates.end(), mod.begin(), mod.end());
  };
  for (size_t t = 0; t < ens.n; ++t) {
    emit(t);
    emit(t + ens.n);
  }
  for (size_t i = 0; i < ens.n; ++i) c.gates.push_back({GateKind::H, i});
  return c;
}

size_t circuit_depth(const Circuit& c) {
  std::vector<size_t> layer(c.n, 0);
  size_t depth = 0;
  for (const Gate& g : c.gates) {
    size_t l = layer[g.q0];
    if (gate_is_two_qubit(g.kind)) l = std::max(l, layer[g.q1]);
    ++l;
    layer[g.q0] = l;
    if (gate_is_two_qubit(g.kind)) layer[g.q1] = l;
    depth = std::max(depth, l);
  }
  return depth;
}

namespace {

// g†Pg when through == Forward, gPg† when through == Inverse, in place.
void conjugate_through_gate(PhasedPauli& p, const Gate& g,
                            ConjugateDirection dir) {
  uint32_t ma = 1u << g.q0;
  uint32_t mb = 1u << g.q1;
  bool xa = p.x & ma, za = p.z & ma;
  switch (g.kind) {
    case GateKind::H:
      if (xa && za) p.phase += 2;
      p.x = (p.x & ~ma) | (za ? ma : 0);
      p.z = (p.z & ~ma) | (xa ? ma : 0);
      break;
    case GateKind::S:
      if (xa) {
        p.z ^= ma;
        p.phase += dir == ConjugateDirection::Forward ? 3 : 1;
      }
      break;
    case GateKind::Sdg:
      if (xa) {
        p.z ^= ma;
        p.phase += dir == ConjugateDirection::Forward ? 1 : 3;
      }
      break;
    case GateKind::CZ: {
      bool xb = p.x & mb;
      if (xb) p.z ^= ma;
      if (xa) p.z ^= mb;
      if (xa && xb) p.phase += 2;
      break;
    }
    case GateKind::CX: {
      if (xa) p.x ^= mb;
      if (p.z & mb) p.z ^= ma;
      break;
    }
    case GateKind::X:
      if (za) p.phase += 2;
      break;
    case GateKind::Z:
      if (xa) p.phase += 2;
      break;
    case GateKind::Y:
      if (xa != za) p.phase += 2;
      break;
  }
  p.phase &= 3;
}

}  // namespace

PhasedPauli conjugate_pauli(const Circuit& c, const PhasedPauli& p,
                            ConjugateDirection dir) {
  PhasedPauli r = p;
  if (dir == ConjugateDirection::Forward) {
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
      conjugate_through_gate(r, *it, dir);
  } else {
    for (const Gate& g : c.gates) conjugate_through_gate(r, g, dir);
  }
  return r;
}

SignedZTableau ztableau_of(const Circuit& c) {
  SignedZTableau out{{BinaryMatrix(c.n, c.n), BinaryMatrix(c.n, c.n)}, {}};
  for (size_t i = 0; i < c.n; ++i) {
    PhasedPauli zi{c.n, 0, 1u << i, 0};
    PhasedPauli g = conjugate_pauli(c, zi, ConjugateDirection::Forward);
    out.tableau.C.row(i) = BitVector::from_mask(g.x, c.n);
    out.tableau.D.row(i) = BitVector::from_mask(g.z, c.n);
    out.phases.push_back(g.phase);
  }
  return out;
}

std::string circuit_to_text(const Circuit& c, const std::string& header) {
  std::ostringstream os;
  if (!header.empty()) os << "# " << header << "\n";
  for (const Gate& g : c.gates) {
    os << gate_name(g.kind) << ' ' << g.q0;
    if (gate_is_two_qubit(g.kind)) os << ' ' << g.q1;
    os << '\n';
  }
  return os.str();
}

Circuit parse_circuit_text(const std::string& text) {
  Circuit c;
  size_t max_q = 0;
  bool any = false;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Honor an `n=<n>` header field if present.
      size_t pos = line.find("n=");
      if (pos != std::string::npos) c.n = std::stoul(line.substr(pos + 2));
      continue;
    }
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    Gate g;
    if (name == "H") g.kind = GateKind::H;
    else if (name == "S") g.kind = GateKind::S;
    else if (name == "Sdg") g.kind = GateKind::Sdg;
    else if (name == "CZ") g.kind = GateKind::CZ;
    else if (name == "CX") g.kind = GateKind::CX;
    else if (name == "X") g.kind = GateKind::X;
    else if (name == "Y") g.kind = GateKind::Y;
    else if (name == "Z") g.kind = GateKind::Z;
    else throw std::invalid_argument("parse_circuit_text: unknown gate " + name);
    if (!(ls >> g.q0)) throw std::invalid_argument("parse_circuit_text: missing qubit");
    max_q = std::max(max_q, g.q0);
    if (gate_is_two_qubit(g.kind)) {
      if (!(ls >> g.q1)) throw std::invalid_argument("parse_circuit_text: missing qubit");
      if (g.q1 == g.q0) throw std::invalid_argument("parse_circuit_text: repeated qubit");
      max_q = std::max(max_q, g.q1);
    }
    c.gates.push_back(g);
    any = true;
  }
  if (c.n == 0 && any) c.n = max_q + 1;
  return c;
}

}  // namespace mcm
