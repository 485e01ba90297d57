"""End-to-end smoke checks of the python bindings."""

import math

import numpy as np
import pytest

import tanglebound as tb


def test_named_states_and_tangle():
    ghz = tb.named_state(tb.StateKind.GHZ)
    w = tb.named_state(tb.StateKind.W)
    assert tb.tau3(ghz) == pytest.approx(1.0, abs=1e-12)
    assert tb.tau3(w) == pytest.approx(0.0, abs=1e-12)
    assert abs(ghz.overlap(w)) < 1e-15

    amps = np.asarray(ghz.amplitudes)
    assert amps.shape == (8,)
    assert amps[0] == pytest.approx(1.0 / math.sqrt(2.0))

    breakdown = tb.three_tangle(ghz)
    assert breakdown["tau3"] == pytest.approx(1.0, abs=1e-12)
    assert breakdown["d1"] == pytest.approx(0.25)


def test_state_validation():
    bad = np.zeros(8, dtype=complex)
    bad[0] = 1.1
    with pytest.raises(ValueError):
        tb.PureState(bad)
    renormed = tb.PureState.normalized(bad)
    assert tb.tau3(renormed) == pytest.approx(0.0, abs=1e-14)


def test_curve_landmarks():
    bench = tb.benchmarks()
    assert bench["q0"] == pytest.approx(0.626851014849947478, abs=1e-12)
    assert bench["r1"] == pytest.approx(-2.697992147380434704, abs=1e-12)
    assert tb.tau3_closed_form(bench["q0"], 0.0) == pytest.approx(0.0, abs=1e-12)

    z = tb.z_state(0.5, 0.0)
    assert tb.tau3(z) == pytest.approx(tb.tau3_closed_form(0.5, 0.0), abs=1e-12)

    assert tb.skew_qmin(1.0, math.pi, 1.0) == pytest.approx(0.2, abs=1e-12)
    assert tb.skew_qmin(1.0, 0.0, 1.0) is None


def test_witnesses_and_expectations():
    ghz = tb.named_state(tb.StateKind.GHZ)
    witness = tb.projector_witness(ghz, 0.75)
    assert witness.expectation(ghz) == pytest.approx(-0.25)
    lo, hi = witness.eigenvalue_range()
    assert lo == pytest.approx(-0.25)
    assert hi == pytest.approx(0.75)

    skew = tb.skew_witness(1.0)
    z = tb.z_state(0.3, 2.0)
    expected = -0.3 + 2.0 * math.cos(2.0) * math.sqrt(0.3 * 0.7)
    assert skew.expectation(z) == pytest.approx(expected, abs=1e-12)


def test_convex_envelope():
    curve = tb.SampledCurve([0.0, 0.5, 1.0], [0.0, 1.0, 0.0])
    env = tb.lower_convex_envelope(curve)
    assert env.eval(0.5) == pytest.approx(0.0)
    assert env.affine_regions == [(0.0, 1.0)]


def test_plane_bound_matches_analytic():
    ghz = tb.named_state(tb.StateKind.GHZ)
    w = tb.named_state(tb.StateKind.W)

    problem = tb.BoundProblem()
    problem.witnesses = [tb.projector_witness(ghz, 0.0)]
    problem.measured = [-0.85]
    problem.space = tb.SearchSpace.span(ghz, w)
    settings = tb.OptimizerSettings()
    settings.restarts = 8
    problem.settings = settings

    result = tb.legendre_bound(problem)
    assert result.epsilon == pytest.approx(tb.restricted_bound_analytic(0.85), abs=1e-4)
    assert result.status == tb.SolveStatus.CONVERGED
    assert all(pt.value <= result.epsilon + 1e-6 for pt in result.trace)

    target = np.array([-0.68])
    cm = tb.constrained_minimum_at(problem, target)
    assert cm.feasible
    assert cm.value == pytest.approx(tb.tau3_closed_form(0.68, 0.0), abs=1e-7)


def test_certification():
    ghz = tb.named_state(tb.StateKind.GHZ)
    amps = np.asarray(ghz.amplitudes).reshape(8, 1)
    rho = amps @ amps.conj().T
    cert = tb.certify_decomposition([1.0], [ghz], rho)
    assert cert.valid
    assert cert.upper_bound == pytest.approx(1.0)

    assert tb.noisy_ghz_fidelity(5.0 / 7.0) == pytest.approx(0.75, abs=1e-15)
