#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "mcm/biased.hpp"
#include "mcm/shadow.hpp"

using namespace mcm;

namespace {

DenseObservable dense_unitary(const Circuit& c) {
  DenseObservable u(c.n);
  StateVector basis = make_zero_state(c.n);
  for (size_t col = 0; col < u.dim(); ++col) {
    basis.amps.assign(basis.amps.size(), 0.0);
    basis.amps[col] = 1.0;
    StateVector out = apply_circuit(basis, c);
    for (size_t r = 0; r < u.dim(); ++r) u.at(r, col) = out.amps[r];
  }
  return u;
}

// Exact expected value of the single-shot estimator under the uniform
// measurement ensemble: sum over elements and outcomes of probability
// times estimate. This is the independent oracle for unbiasedness.
double exact_mcm_mean(const StateVector& rho, const DenseObservable& o) {
  MubEnsemble ens = build_ensemble(rho.n);
  double total = 0;
  for (size_t e = 0; e < ens.size(); ++e) {
    Circuit u = synthesize(ens, e);
    std::vector<double> p = probabilities(apply_circuit(rho, u));
    for (size_t b = 0; b < p.size(); ++b)
      if (p[b] > 0) total += p[b] * mcm_estimate(o, u, b);
  }
  return total / static_cast<double>(ens.size());
}

double exact_pauli_mean(const StateVector& rho, const DenseObservable& o) {
  auto terms = pauli_decompose(o);
  size_t n = rho.n;
  size_t num_bases = 1;
  for (size_t j = 0; j < n; ++j) num_bases *= 3;
  double total = 0;
  std::vector<int> bases(n);
  for (size_t code = 0; code < num_bases; ++code) {
    size_t c = code;
    for (size_t j = 0; j < n; ++j) {
      bases[j] = static_cast<int>(c % 3);
      c /= 3;
    }
    std::vector<double> p =
        probabilities(apply_circuit(rho, pauli_basis_circuit(bases)));
    for (uint64_t b = 0; b < p.size(); ++b)
      if (p[b] > 0) total += p[b] * pauli_shadow_estimate(terms, bases, b);
  }
  return total / static_cast<double>(num_bases);
}

}  // namespace

TEST_CASE("series statistics") {
  EstimateSeries s{Protocol::Mcm, 1, 0, {1.0, 3.0, 5.0}};
  CHECK(s.mean() == doctest::Approx(3.0));
  CHECK(s.variance() == doctest::Approx(4.0));  // unbiased: sum sq / (N-1)
  EstimateSeries empty{Protocol::Mcm, 1, 0, {}};
  CHECK(empty.mean() == 0.0);
  CHECK(empty.variance() == 0.0);
}

TEST_CASE("single-shot estimator fixtures") {
  MubEnsemble ens = build_ensemble(3);
  auto circuits = ensemble_circuits(ens);
  SUBCASE("the identity observable always estimates 1") {
    DenseObservable id = identity_observable(3);
    for (size_t e = 0; e < ens.size(); ++e)
      for (uint64_t b = 0; b < 8; ++b)
        CHECK(mcm_estimate(id, circuits[e], b) == doctest::Approx(1.0));
  }
  SUBCASE("GHZ projector in the computational basis") {
    DenseObservable proj = projector(make_ghz_state(3));
    // <0|P|0> = 1/2, so the estimate is (2^n+1)/2 - 1.
    CHECK(mcm_estimate(proj, circuits[0], 0) == doctest::Approx(9.0 / 2 - 1));
    CHECK(mcm_estimate(proj, circuits[0], 1) == doctest::Approx(-1.0));
  }
}

TEST_CASE("estimator is exactly unbiased (enumeration over the ensemble)") {
  Rng rng(101);
  for (size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      StateVector rho = make_haar_state(n, rng);
      DenseObservable o = projector(make_haar_state(n, rng));
      double truth = expectation(rho, o);
      CHECK(exact_mcm_mean(rho, o) == doctest::Approx(truth).epsilon(1e-9));
      CHECK(exact_pauli_mean(rho, o) == doctest::Approx(truth).epsilon(1e-9));
    }
    // Also a non-projector observable with nonzero trace.
    StateVector rho = make_ghz_state(n);
    DenseObservable o = corner_observable(n, 0.7);
    double truth = expectation(rho, o);
    CHECK(exact_mcm_mean(rho, o) == doctest::Approx(truth).epsilon(1e-9));
    CHECK(exact_pauli_mean(rho, o) == doctest::Approx(truth).epsilon(1e-9));
  }
}

TEST_CASE("element sampling is uniform (chi-squared, n=4)") {
  MubEnsemble ens = build_ensemble(4);
  Rng rng(103);
  const size_t shots = 170000;
  std::vector<size_t> counts(ens.size(), 0);
  for (size_t s = 0; s < shots; ++s) ++counts[sample_mcm_element(ens, rng)];
  double expected = static_cast<double>(shots) / ens.size();
  double chi2 = 0;
  for (size_t c : counts) {
    double d = c - expected;
    chi2 += d * d / expected;
  }
  // df = 16, p = 0.001 critical value.
  CHECK(chi2 < 39.25);
}

TEST_CASE("uniform Clifford sampler") {
  SUBCASE("n=1: all 24 single-qubit Cliffords, each near 1/24") {
    Rng rng(107);
    std::map<std::array<uint32_t, 6>, size_t> hist;
    const size_t shots = 960000;
    PhasedPauli x{1, 1, 0, 0}, z{1, 0, 1, 0};
    for (size_t s = 0; s < shots; ++s) {
      Circuit u = sample_full_clifford(1, rng);
      PhasedPauli ix = conjugate_pauli(u, x, ConjugateDirection::Inverse);
      PhasedPauli iz = conjugate_pauli(u, z, ConjugateDirection::Inverse);
      hist[{ix.x, ix.z, static_cast<uint32_t>(ix.phase), iz.x, iz.z,
            static_cast<uint32_t>(iz.phase)}]++;
    }
    CHECK(hist.size() == 24);
    for (const auto& [key, count] : hist)
      CHECK(std::abs(count / double(shots) - 1.0 / 24) < 0.02 / 24);
  }
  SUBCASE("n=2: pair frame potential matches a unitary 2-design") {
    Rng rng(109);
    double sum = 0;
    const int pairs = 20000;
    for (int t = 0; t < pairs; ++t) {
      DenseObservable u = dense_unitary(sample_full_clifford(2, rng));
      DenseObservable v = dense_unitary(sample_full_clifford(2, rng));
      Complex tr = 0;
      for (size_t r = 0; r < 4; ++r)
        for (size_t c = 0; c < 4; ++c) tr += std::conj(u.at(r, c)) * v.at(r, c);
      double a = std::norm(tr);
      sum += a * a;
    }
    CHECK(std::abs(sum / pairs - 2.0) < 0.1);
  }
  SUBCASE("Monte-Carlo channel matches (rho + I) / (2^n + 1)") {
    Rng rng(113);
    size_t n = 2;
    StateVector rho = make_haar_state(n, rng);
    DenseObservable acc(n);
    const size_t shots = 100000;
    StateVector basis = make_zero_state(n);
    for (size_t s = 0; s < shots; ++s) {
      Circuit u = sample_full_clifford(n, rng);
      uint64_t b = sample_bitstring(apply_circuit(rho, u), rng).to_mask();
      basis.amps.assign(basis.amps.size(), 0.0);
      basis.amps[b] = 1.0;
      StateVector phi = apply_circuit(basis, u.inverse());
      for (size_t r = 0; r < acc.dim(); ++r)
        for (size_t c = 0; c < acc.dim(); ++c)
          acc.at(r, c) += phi.amps[r] * std::conj(phi.amps[c]) / double(shots);
    }
    DenseObservable want = add(projector(rho), identity_observable(n));
    for (size_t r = 0; r < acc.dim(); ++r)
      for (size_t c = 0; c < acc.dim(); ++c)
        CHECK(std::abs(acc.at(r, c) - want.at(r, c) / 5.0) < 0.015);
  }
  SUBCASE("range check") {
    Rng rng(1);
    CHECK_THROWS(sample_full_clifford(9, rng));
  }
}

TEST_CASE("per-qubit Pauli shadows") {
  SUBCASE("single-letter fixtures") {
    std::vector<PauliTerm> z0 = {{1.0, parse_pauli("ZII")}};  // Z on qubit 0
    CHECK(pauli_shadow_estimate(z0, {2, 0, 1}, 0b000) == doctest::Approx(3.0));
    CHECK(pauli_shadow_estimate(z0, {2, 0, 1}, 0b001) == doctest::Approx(-3.0));
    CHECK(pauli_shadow_estimate(z0, {0, 2, 2}, 0b000) == doctest::Approx(0.0));
    std::vector<PauliTerm> y1 = {{0.5, parse_pauli("IYI")}};
    CHECK(pauli_shadow_estimate(y1, {2, 1, 2}, 0b010) == doctest::Approx(-1.5));
  }
  SUBCASE("identity term passes through untouched") {
    std::vector<PauliTerm> id = {{0.25, PhasedPauli{3, 0, 0, 0}}};
    CHECK(pauli_shadow_estimate(id, {0, 1, 2}, 0b101) == doctest::Approx(0.25));
  }
  SUBCASE("second moment of a weight-k Pauli is exactly 3^k at rho = I/2^n") {
    size_t n = 3;
    std::vector<PauliTerm> term = {{1.0, parse_pauli("IXZ")}};  // weight 2
    double sum = 0;
    size_t cells = 0;
    std::vector<int> bases(n);
    for (size_t code = 0; code < 27; ++code) {
      size_t c = code;
      for (size_t j = 0; j < n; ++j) {
        bases[j] = static_cast<int>(c % 3);
        c /= 3;
      }
      for (uint64_t b = 0; b < 8; ++b) {
        double e = pauli_shadow_estimate(term, bases, b);
        sum += e * e;
        ++cells;
      }
    }
    CHECK(sum / cells == doctest::Approx(9.0));
  }
  SUBCASE("basis-change circuits rotate the right Pauli to Z") {
    Circuit cx = pauli_basis_circuit({0});
    PhasedPauli img = conjugate_pauli(cx, parse_pauli("X"),
                                      ConjugateDirection::Inverse);
    CHECK(img.to_string() == "Z");
    Circuit cy = pauli_basis_circuit({1});
    img = conjugate_pauli(cy, parse_pauli("Y"), ConjugateDirection::Inverse);
    CHECK(img.to_string() == "Z");
    CHECK(pauli_basis_circuit({2}).gates.empty());
  }
}

TEST_CASE("protocols converge to the true expectation value") {
  Rng rng(127);
  size_t n = 3;
  StateVector rho = make_ghz_state(n);
  DenseObservable proj = projector(rho);
  const size_t shots = 20000;
  for (Protocol p : {Protocol::Mcm, Protocol::FullClifford, Protocol::Pauli}) {
    EstimateSeries s = run_protocol(rho, proj, shots, p, rng);
    CHECK(s.values.size() == shots);
    double sigma = std::sqrt(s.variance() / shots);
    CHECK(std::abs(s.mean() - 1.0) < 5 * sigma + 1e-12);
  }
  CHECK_THROWS(run_protocol(rho, proj, 10, Protocol::Biased, rng));
  CHECK_THROWS(run_protocol(make_zero_state(2), proj, 10, Protocol::Mcm, rng));
}

TEST_CASE("basis split of an observable") {
  size_t n = 3;
  MubEnsemble ens = build_ensemble(n);
  auto circuits = ensemble_circuits(ens);
  Rng rng(131);
  DenseObservable o = projector(make_haar_state(n, rng));
  for (size_t e = 0; e < ens.size(); ++e) {
    SplitObservable split = split_observable(o, circuits[e]);
    // Off-diagonal part really is off-diagonal in the measurement basis.
    DenseObservable rot = conjugate_observable(split.off_diag, circuits[e]);
    for (size_t b = 0; b < rot.dim(); ++b)
      CHECK(std::abs(rot.at(b, b)) < 1e-10);
    // Putting the diagonal back reconstructs the rotated observable.
    DenseObservable orot = conjugate_observable(o, circuits[e]);
    for (size_t b = 0; b < rot.dim(); ++b) rot.at(b, b) = split.diag[b];
    for (size_t r = 0; r < rot.dim(); ++r)
      for (size_t c = 0; c < rot.dim(); ++c)
        CHECK(std::abs(rot.at(r, c) - orot.at(r, c)) < 1e-10);
    // And the l1 coherence agrees with a direct absolute sum.
    double direct = 0;
    for (size_t r = 0; r < orot.dim(); ++r)
      for (size_t c = 0; c < orot.dim(); ++c)
        if (r != c) direct += std::abs(orot.at(r, c));
    CHECK(coherence_l1(o, circuits[e]) == doctest::Approx(direct));
  }
  // The GHZ off-diagonal observable has l1 coherence 1 in the Z basis.
  Circuit id;
  id.n = n;
  CHECK(coherence_l1(ghz_offdiag_observable(n), id) == doctest::Approx(1.0));
}

TEST_CASE("two-stage off-diagonal estimator is unbiased") {
  Rng rng(137);
  size_t n = 3;
  StateVector rho = make_ghz_state(n);
  DenseObservable o = projector(rho);
  Circuit id;
  id.n = n;
  OffDiagonalEstimate est = estimate_off_diagonal(rho, o, id, 50000, 50000, rng);
  double sigma = std::sqrt(est.diag_variance / 50000) +
                 std::sqrt(est.offdiag_variance / 50000);
  CHECK(std::abs(est.value - 1.0) < 5 * sigma + 1e-12);
  // The diagonal stage alone measures the Z-basis diagonal contribution 1/2.
  CHECK(std::abs(est.diag_mean - 0.5) <
        5 * std::sqrt(est.diag_variance / 50000) + 1e-12);
}

TEST_CASE("exact measurement channel") {
  Rng rng(139);
  for (size_t n = 1; n <= 3; ++n) {
    MubEnsemble ens = build_ensemble(n);
    StateVector psi = make_haar_state(n, rng);
    DenseObservable rho = projector(psi);
    DenseObservable got = channel_oracle(ens, rho);
    DenseObservable want =
        add(rho, identity_observable(n));
    double scale = 1.0 / (static_cast<double>(rho.dim()) + 1.0);
    for (size_t r = 0; r < got.dim(); ++r)
      for (size_t c = 0; c < got.dim(); ++c)
        CHECK(std::abs(got.at(r, c) - scale * want.at(r, c)) < 1e-10);
  }
}

TEST_CASE("protocol names round-trip") {
  for (Protocol p : {Protocol::Mcm, Protocol::FullClifford, Protocol::Pauli,
                     Protocol::Biased})
    CHECK(parse_protocol(protocol_name(p)) == p);
  CHECK_THROWS(parse_protocol("haar"));
}
