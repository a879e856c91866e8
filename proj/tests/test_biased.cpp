#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "mcm/biased.hpp"

using namespace mcm;

namespace {

DenseObservable stabilizer_projector(const Circuit& v) {
  // O = V† |0..0><0..0| V.
  StateVector psi = apply_circuit(make_zero_state(v.n), v.inverse());
  return projector(psi);
}

// Exact expectation of the single-shot biased estimator by enumerating
// the supported elements and all outcomes with their Born probabilities.
double exact_biased_mean(const StateVector& rho, const DenseObservable& o,
                         const BiasedDistribution& dist,
                         const std::vector<Circuit>& circuits) {
  double total = 0;
  for (size_t e : dist.support) {
    std::vector<double> p = probabilities(apply_circuit(rho, circuits[e]));
    for (uint64_t b = 0; b < p.size(); ++b)
      if (p[b] > 0)
        total += dist.probs[e] * p[b] *
                 biased_estimate(o, circuits[e], b, dist.probs[e]);
  }
  return total;
}

}  // namespace

TEST_CASE("per-element bias weights") {
  size_t n = 3;
  MubEnsemble ens = build_ensemble(n);
  auto circuits = ensemble_circuits(ens);
  SUBCASE("identity observable carries no weight anywhere") {
    DenseObservable id = identity_observable(n);
    for (const Circuit& c : circuits) CHECK(b_u(id, c) == doctest::Approx(0.0));
    CHECK_THROWS(optimal_distribution(id, circuits));
  }
  SUBCASE("GHZ projector in the computational basis") {
    DenseObservable proj = projector(make_ghz_state(n));
    CHECK(b_u(proj, circuits[0]) == doctest::Approx(0.5 - 1.0 / 8));
  }
  SUBCASE("stabilizer observables: weights sum to 1 - 2^-n") {
    Rng rng(211);
    for (size_t nn = 1; nn <= 4; ++nn) {
      MubEnsemble e2 = build_ensemble(nn);
      auto cs = ensemble_circuits(e2);
      for (int trial = 0; trial < 3; ++trial) {
        DenseObservable o = stabilizer_projector(sample_full_clifford(nn, rng));
        double sum = 0;
        for (const Circuit& c : cs) sum += b_u(o, c);
        CHECK(sum == doctest::Approx(1.0 - std::ldexp(1.0, -int(nn))).epsilon(1e-9));
      }
    }
  }
  SUBCASE("optimal distribution is normalized over its support") {
    DenseObservable proj = projector(make_ghz_state(n));
    BiasedDistribution dist = optimal_distribution(proj, circuits);
    double sum = 0;
    for (size_t e : dist.support) {
      CHECK(dist.probs[e] > 0);
      sum += dist.probs[e];
    }
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("biased estimator is exactly unbiased over its support") {
  Rng rng(223);
  for (size_t n = 1; n <= 3; ++n) {
    MubEnsemble ens = build_ensemble(n);
    auto circuits = ensemble_circuits(ens);
    for (int trial = 0; trial < 5; ++trial) {
      StateVector rho = make_haar_state(n, rng);
      DenseObservable o = projector(make_haar_state(n, rng));
      BiasedDistribution dist = optimal_distribution(o, circuits);
      double truth = expectation(rho, o);
      CHECK(exact_biased_mean(rho, o, dist, circuits) ==
            doctest::Approx(truth).epsilon(1e-9));
    }
  }
  CHECK_THROWS(biased_estimate(identity_observable(2), Circuit{2, {}}, 0, 0.0));
}

TEST_CASE("stabilizer observables have zero variance on their own state") {
  Rng rng(227);
  for (size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      Circuit v = sample_full_clifford(n, rng);
      DenseObservable o = stabilizer_projector(v);
      StateVector rho = apply_circuit(make_zero_state(n), v.inverse());
      EstimateSeries s = run_biased_protocol(rho, o, 2000, rng);
      for (double val : s.values) CHECK(std::abs(val - 1.0) < 1e-9);
      CHECK(s.variance() == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("stabilizer observables: variance at most 1 on any state") {
  Rng rng(229);
  size_t n = 3;
  Circuit v = sample_full_clifford(n, rng);
  DenseObservable o = stabilizer_projector(v);
  StateVector rho = make_haar_state(n, rng);
  EstimateSeries s = run_biased_protocol(rho, o, 40000, rng);
  double truth = expectation(rho, o);
  double sigma = std::sqrt(s.variance() / s.values.size());
  CHECK(std::abs(s.mean() - truth) < 5 * sigma + 1e-12);
  // Single-shot variance of a stabilizer projector is bounded by 1.
  CHECK(s.variance() <= 1.0 + 0.05);
}

TEST_CASE("stabilizer norm") {
  SUBCASE("single Hermitian Paulis have norm 1") {
    for (const char* p : {"X", "ZZ", "XYZ", "-YXI"})
      CHECK(stabilizer_norm(pauli_to_dense(parse_pauli(p))) ==
            doctest::Approx(1.0));
  }
  SUBCASE("stabilizer-state projectors have norm 1") {
    Rng rng(233);
    for (size_t n = 1; n <= 4; ++n)
      for (int trial = 0; trial < 3; ++trial)
        CHECK(stabilizer_norm(stabilizer_projector(sample_full_clifford(n, rng))) ==
              doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("XZ product observables: squared norm is (1 + sin 2t)^n") {
    for (size_t n : {size_t{1}, size_t{3}, size_t{5}}) {
      for (double t : {0.1, 0.4, 0.785398163397448}) {
        double d = stabilizer_norm(xz_product_observable(n, n, t));
        CHECK(d * d ==
              doctest::Approx(std::pow(1.0 + std::sin(2 * t), double(n)))
                  .epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("pauli-sum sampling distributions") {
  size_t n = 3;
  MubEnsemble ens = build_ensemble(n);
  SUBCASE("a single Pauli puts all mass on its owning element") {
    PauliSumObservable o{n, {{0.7, parse_pauli("ZZI")}}, 0.0};
    BiasedDistribution dist = pauli_sum_distribution(o, ens);
    CHECK(dist.support.size() == 1);
    CHECK(dist.support[0] == 0);  // Z-type strings live in the Z element
    CHECK(dist.probs[0] == doctest::Approx(1.0));
  }
  SUBCASE("equal-weight Z and X split evenly across two elements") {
    PauliSumObservable o{n,
                         {{0.5, parse_pauli("ZII")}, {0.5, parse_pauli("XII")}},
                         0.0};
    BiasedDistribution dist = pauli_sum_distribution(o, ens);
    CHECK(dist.support.size() == 2);
    CHECK(dist.probs[0] == doctest::Approx(0.5));
    CHECK(dist.probs[1] == doctest::Approx(0.5));  // v=0 element owns bare X
  }
  SUBCASE("weights follow |coeff| and normalize") {
    PauliSumObservable o{n,
                         {{-3.0, parse_pauli("ZII")}, {1.0, parse_pauli("XII")}},
                         0.0};
    BiasedDistribution dist = pauli_sum_distribution(o, ens);
    CHECK(dist.probs[0] == doctest::Approx(0.75));
    CHECK(dist.probs[1] == doctest::Approx(0.25));
  }
  SUBCASE("identity terms and empty sums are rejected") {
    CHECK_THROWS(pauli_sum_distribution({n, {}, 1.0}, ens));
    CHECK_THROWS(
        pauli_sum_distribution({n, {{1.0, PhasedPauli{n, 0, 0, 0}}}, 1.0}, ens));
  }
  SUBCASE("biased run under a pauli-sum distribution stays unbiased") {
    auto circuits = ensemble_circuits(ens);
    DenseObservable dense = add(pauli_to_dense(parse_pauli("ZII")),
                                pauli_to_dense(parse_pauli("XII")), 0.5);
    PauliSumObservable o{n,
                         {{1.0, parse_pauli("ZII")}, {0.5, parse_pauli("XII")}},
                         0.0};
    BiasedDistribution dist = pauli_sum_distribution(o, ens);
    Rng rng(239);
    StateVector rho = make_haar_state(n, rng);
    CHECK(exact_biased_mean(rho, dense, dist, circuits) ==
          doctest::Approx(expectation(rho, dense)).epsilon(1e-9));
    // Empirical variance respects the (sum |alpha|)^2 bound.
    EstimateSeries s = run_biased_protocol(rho, dense, 20000, rng, &dist);
    CHECK(s.variance() <= 1.5 * 1.5 + 1e-9);
  }
}

TEST_CASE("stabilizer sampler draws elements with the optimal weights") {
  Rng rng(241);
  size_t n = 3;
  MubEnsemble ens = build_ensemble(n);
  auto circuits = ensemble_circuits(ens);
  Circuit v = sample_full_clifford(n, rng);
  StabilizerObservable obs{v};
  BiasedDistribution want = optimal_distribution(stabilizer_projector(v), circuits);
  std::map<size_t, size_t> counts;
  std::map<size_t, double> reported_p;
  const size_t draws = 100000;
  for (size_t t = 0; t < draws; ++t) {
    auto [e, p] = stabilizer_sampler(obs, ens, circuits, rng);
    ++counts[e];
    if (reported_p.count(e)) {
      CHECK(reported_p[e] == doctest::Approx(p));
    } else {
      reported_p[e] = p;
    }
  }
  double tv = 0;
  for (size_t e = 0; e < ens.size(); ++e) {
    double freq = counts.count(e) ? counts[e] / double(draws) : 0.0;
    tv += std::abs(freq - want.probs[e]);
  }
  CHECK(tv / 2 < 0.02);
  // The reported probability matches the dense-matrix optimal weight.
  for (const auto& [e, p] : reported_p)
    CHECK(p == doctest::Approx(want.probs[e]).epsilon(1e-9));
}

TEST_CASE("overlap profiles: 2^r_U flat entries summing to the frame bound") {
  Rng rng(251);
  for (size_t n = 1; n <= 4; ++n) {
    MubEnsemble ens = build_ensemble(n);
    auto circuits = ensemble_circuits(ens);
    for (int trial = 0; trial < 3; ++trial) {
      StabilizerObservable obs{sample_full_clifford(n, rng)};
      double total_max = 0;
      for (size_t e = 0; e < ens.size(); ++e) {
        AlphaProfile prof = alpha_profile(obs, ens, circuits, e);
        CHECK(prof.max_alpha ==
              doctest::Approx(std::ldexp(1.0, -int(prof.r_u))).epsilon(1e-9));
        total_max += prof.max_alpha;
      }
      CHECK(total_max == doctest::Approx(2.0).epsilon(1e-9));
    }
  }
}
