#include <doctest.h>

#include <cmath>
#include <complex>

#include "tanglebound/optimizer.hpp"
#include "tanglebound/qstate.hpp"

using namespace tanglebound;

namespace {

Matrix2 random_su2(Rng& rng) {
  double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
  const double n = std::sqrt(a * a + b * b + c * c + d * d);
  a /= n;
  b /= n;
  c /= n;
  d /= n;
  Matrix2 u;
  u << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return u;
}

PureState random_state(Rng& rng) {
  Amplitudes a;
  for (int i = 0; i < 8; ++i) a(i) = Complex(rng.normal(), rng.normal());
  return PureState::normalized(a);
}

}  // namespace

TEST_CASE("named states are normalized with the expected supports") {
  const PureState ghz = named_state(StateKind::Ghz);
  CHECK(std::abs(ghz.amplitude(0) - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(ghz.amplitude(7) - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
  for (int i : {1, 2, 3, 4, 5, 6}) CHECK(std::abs(ghz.amplitude(i)) == 0.0);

  const PureState w = named_state(StateKind::W);
  for (int i : {1, 2, 4}) {
    CHECK(std::abs(w.amplitude(i) - Complex(1.0 / std::sqrt(3.0), 0)) < 1e-15);
  }
  for (int i : {0, 3, 5, 6, 7}) CHECK(std::abs(w.amplitude(i)) == 0.0);

  const PureState wbar = named_state(StateKind::WBar);
  for (int i : {3, 5, 6}) {
    CHECK(std::abs(wbar.amplitude(i) - Complex(1.0 / std::sqrt(3.0), 0)) < 1e-15);
  }

  const PureState ghzm = named_state(StateKind::GhzMinus);
  CHECK(std::abs(ghzm.amplitude(7) + Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(ghz.overlap(ghzm)) < 1e-15);
}

TEST_CASE("construction rejects unnormalized amplitudes") {
  Amplitudes a = Amplitudes::Zero();
  a(0) = 1.1;
  CHECK_THROWS_AS(PureState{a}, std::invalid_argument);
  CHECK_THROWS_AS(PureState::normalized(Amplitudes::Zero()), std::invalid_argument);
  CHECK(std::abs(PureState::normalized(a).amplitude(0) - Complex(1, 0)) < 1e-15);
}

TEST_CASE("three-tangle on reference states") {
  CHECK(tau3(named_state(StateKind::Ghz)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tau3(named_state(StateKind::GhzMinus)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tau3(named_state(StateKind::W)) < 1e-15);
  CHECK(tau3(named_state(StateKind::WBar)) < 1e-15);
  for (int i = 0; i < 8; ++i) CHECK(tau3(basis_state(i)) < 1e-15);

  const TangleBreakdown b = three_tangle(named_state(StateKind::Ghz));
  CHECK(std::abs(b.d1 - Complex(0.25, 0)) < 1e-15);
  CHECK(std::abs(b.d2) < 1e-15);
  CHECK(std::abs(b.d3) < 1e-15);
  CHECK(b.tau3_sq == doctest::Approx(b.tau3 * b.tau3).epsilon(1e-14));
  CHECK(measure_value(Measure::Tau3Sq, named_state(StateKind::Ghz)) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("three-tangle is invariant under local unitaries") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const PureState psi = random_state(rng);
    const double before = tau3(psi);
    const PureState rotated =
        apply_local_unitary(psi, random_su2(rng), random_su2(rng), random_su2(rng));
    CHECK(std::abs(tau3(rotated) - before) < 1e-10);
  }
}

TEST_CASE("local unitary factors must be unitary") {
  Matrix2 bad;
  bad << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0.5, 0);
  const PureState ghz = named_state(StateKind::Ghz);
  CHECK_THROWS_AS(apply_local_unitary(ghz, bad, Matrix2::Identity(), Matrix2::Identity()),
                  std::invalid_argument);
}

TEST_CASE("projector observables expose their structure") {
  const Observable w = projector_witness(named_state(StateKind::Ghz), 0.5);
  REQUIRE(w.projector_form().has_value());
  CHECK(w.projector_form()->alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.projector_form()->sign == doctest::Approx(-1.0));
  CHECK(w.expectation(named_state(StateKind::Ghz)) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(w.expectation(named_state(StateKind::W)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  const auto [lo, hi] = w.eigenvalue_range();
  CHECK(lo == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.5).epsilon(1e-12));

  const Amplitudes g = named_state(StateKind::Ghz).amplitudes();
  const Observable plus(Matrix8(g * g.adjoint()), "pi_ghz");
  REQUIRE(plus.projector_form().has_value());
  CHECK(plus.projector_form()->alpha == doctest::Approx(0.0));
  CHECK(plus.projector_form()->sign == doctest::Approx(1.0));

  CHECK_THROWS_AS(projector_witness(named_state(StateKind::Ghz), 1.5),
                  std::invalid_argument);
}

TEST_CASE("observables must be Hermitian") {
  Matrix8 m = Matrix8::Zero();
  m(0, 1) = Complex(1, 0);
  CHECK_THROWS_AS(Observable{m}, std::invalid_argument);
}

TEST_CASE("skew witness expectation matches its closed form") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const double omega = rng.uniform(-1.5, 1.5);
    const double q = rng.uniform();
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const Observable w = skew_witness(Complex(omega, 0));
    REQUIRE(w.skew_form().has_value());

    Amplitudes z = std::sqrt(q) * named_state(StateKind::Ghz).amplitudes() -
                   std::exp(Complex(0, phi)) * std::sqrt(1.0 - q) *
                       named_state(StateKind::W).amplitudes();
    const PureState state(z);
    const double expected =
        -q + 2.0 * omega * std::cos(phi) * std::sqrt(q * (1.0 - q));
    CHECK(w.expectation(state) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("qubit permutations relabel basis indices") {
  // Index 4i+2j+k; sending qubit d to position perm[d] maps |011> to |101>.
  const PureState in = basis_state(3);
  const PureState out = permute_qubits(in, {1, 2, 0});
  CHECK(std::abs(out.amplitude(5) - Complex(1, 0)) < 1e-15);
  CHECK_THROWS_AS(permute_qubits(in, {0, 0, 2}), std::invalid_argument);

  const PureState w = named_state(StateKind::W);
  for (const std::array<int, 3>& perm :
       {std::array<int, 3>{1, 0, 2}, std::array<int, 3>{2, 1, 0},
        std::array<int, 3>{1, 2, 0}}) {
    const PureState pw = permute_qubits(w, perm);
    CHECK(std::abs(w.overlap(pw) - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("symmetric subspace projection and weight") {
  const PureState w = named_state(StateKind::W);
  CHECK(symmetric_subspace_weight(w) == doctest::Approx(1.0).epsilon(1e-12));

  const PureState one = basis_state(1);
  CHECK(symmetric_subspace_weight(one) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const auto sym = permutation_symmetrize(one);
  REQUIRE(sym.has_value());
  CHECK(std::abs(sym->overlap(w) - Complex(1, 0)) < 1e-12);

  // (|001> - |010>)/sqrt(2) has no symmetric component.
  Amplitudes a = Amplitudes::Zero();
  a(1) = 1.0 / std::sqrt(2.0);
  a(2) = -1.0 / std::sqrt(2.0);
  CHECK(!permutation_symmetrize(PureState(a)).has_value());
  CHECK(symmetric_subspace_weight(PureState(a)) < 1e-15);
}

TEST_CASE("overlap conjugation convention") {
  // <a|b> with the conjugate on the left argument.
  Amplitudes a = Amplitudes::Zero();
  a(0) = Complex(0, 1);
  Amplitudes b = Amplitudes::Zero();
  b(0) = Complex(1, 0);
  CHECK(std::abs(PureState(a).overlap(PureState(b)) - Complex(0, -1)) < 1e-15);
}
