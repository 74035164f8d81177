import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloop.blockops import unitarity_defect
from qloop.errors import SingularityError, ValidationError
from qloop.gallery import (
    SIGMA1,
    MachineParams,
    RotationLoopParams,
    effective_hamiltonian,
    group_law_defect,
    halfpipe_sweep,
    hermitian_defect,
    looped_rotation_L,
    looped_rotation_generic,
    machine_eigensystem,
    mz_network,
    mz_time_probabilities,
    opened_mz_distribution,
    stone_failure_witness,
    symmetric_T,
    two_qubit_T,
    two_qubit_T_generic,
)

TWO_PI = 2 * math.pi
angles = st.floats(-10, 10, allow_nan=False)


def test_looped_rotation_examples():
    assert looped_rotation_L(RotationLoopParams(TWO_PI, math.pi / 2, 0.0)) == pytest.approx(1.0, abs=1e-15)
    assert abs(looped_rotation_L(RotationLoopParams(TWO_PI, math.pi / 2, 0.25)) + 1j) < 1e-15


def test_looped_rotation_at_t_01():
    # phi = pi/2 reduces the phase factor to (2c + i (c^2 - 1)) / (1 + c^2), c = cos(wt)
    c = math.cos(0.2 * math.pi)
    expected = complex(2 * c, c * c - 1) / (1 + c * c)
    p = RotationLoopParams(TWO_PI, math.pi / 2, 0.1)
    value = looped_rotation_L(p)
    assert abs(value - expected) < 1e-15
    assert abs(abs(value) - 1) < 1e-12
    assert abs(looped_rotation_generic(p).L00[0, 0] - value) < 1e-12


@settings(max_examples=200)
@given(angles, angles, angles)
def test_looped_rotation_matches_generic_loop(omega, phi, t):
    p = RotationLoopParams(omega, phi, t)
    try:
        value = looped_rotation_L(p)
        generic = looped_rotation_generic(p)
    except SingularityError:
        return
    assert abs(abs(value) - 1) < 1e-12
    if generic.smallest_singular_value > 1e-3:
        assert abs(generic.L00[0, 0] - value) < 1e-12


def test_looped_rotation_degenerate():
    with pytest.raises(SingularityError):
        looped_rotation_L(RotationLoopParams(1.0, 0.0, 0.0))
    with pytest.raises(ValidationError):
        RotationLoopParams(math.inf, 0.0, 0.0)


def test_halfpipe_defaults():
    rows = halfpipe_sweep()
    assert len(rows) == 401
    assert rows[0] == (0.0, 1.0, 0.0, False)
    r = rows[50]
    assert r.t == 0.25 and abs(r.re) < 1e-12 and abs(r.im + 1) < 1e-12
    assert all(abs(r.re**2 + r.im**2 - 1) < 1e-12 for r in rows)
    assert rows[-1].t == 2.0


def test_halfpipe_flags_degenerate_rows():
    rows = halfpipe_sweep(omega=math.pi, phi=0.0, t_min=0.0, t_max=2.0, n_samples=5)
    assert [r.flag for r in rows] == [True, False, False, False, True]
    assert math.isnan(rows[0].re)


@pytest.mark.parametrize("bad", [dict(n_samples=1), dict(t_min=1.0, t_max=0.5), dict(t_max=math.nan)])
def test_halfpipe_rejects_bad_ranges(bad):
    with pytest.raises(ValueError):
        halfpipe_sweep(**bad)


def texpl(wt, wt_, phi, phi_):
    """Two-qubit machine entries written out directly."""
    c, s, c_, s_ = math.cos(wt), math.sin(wt), math.cos(wt_), math.sin(wt_)
    e = cmath.exp(1j * (phi + phi_))
    d = 1 - e * c * c_
    return np.array([
        [(c - e * c_) / d, cmath.exp(1j * phi_) * s * s_ / d],
        [cmath.exp(1j * phi) * s_ * s / d, (c_ - e * c) / d],
    ])


def test_two_qubit_examples():
    p0 = MachineParams(1.0, 0.0, 1.0, 0.0, 0.4, 0.9)
    assert np.max(np.abs(two_qubit_T(p0) - np.eye(2))) < 1e-15
    q = MachineParams(1.0, math.pi / 2, 1.0, math.pi / 2, 0.4, 0.9)
    expected = np.array([[0, cmath.exp(0.9j)], [cmath.exp(0.4j), 0]])
    assert np.max(np.abs(two_qubit_T(q) - expected)) < 1e-15


@settings(max_examples=150)
@given(angles, angles, angles, angles)
def test_two_qubit_unitary_and_matches_generic(wt, wt_, phi, phi_):
    p = MachineParams(1.0, wt, 1.0, wt_, phi, phi_)
    if abs(1 - cmath.exp(1j * (phi + phi_)) * math.cos(wt) * math.cos(wt_)) < 1e-3:
        return
    t = two_qubit_T(p)
    assert np.max(np.abs(t - texpl(wt, wt_, phi, phi_))) < 1e-12
    assert unitarity_defect(t) < 1e-12
    assert abs(abs(np.linalg.det(t)) - 1) < 1e-12
    assert np.max(np.abs(two_qubit_T_generic(p).T - t)) < 1e-12


def test_symmetric_reduced_form():
    for t in np.linspace(0.01, 1.0, 17):
        for phi in (0.3, 1.2, 2.0):
            p = MachineParams.symmetric(TWO_PI, t, phi)
            e2 = cmath.exp(2j * phi)
            c = math.cos(TWO_PI * t)
            d = 1 - e2 * c * c
            reduced = (1 - e2) * c / d * np.eye(2) + cmath.exp(1j * phi) * math.sin(TWO_PI * t) ** 2 / d * SIGMA1
            assert np.max(np.abs(two_qubit_T(p) - reduced)) < 1e-12
            assert np.max(np.abs(symmetric_T(TWO_PI, t, phi) - reduced)) < 1e-12


def test_two_qubit_singular():
    with pytest.raises(SingularityError):
        two_qubit_T(MachineParams(1.0, 0.0, 1.0, 0.0, 0.5, -0.5))


def test_eigensystem_vectors_and_t0_value():
    es = machine_eigensystem(TWO_PI, 0.0, math.pi / 2)
    r = 1 / math.sqrt(2)
    assert np.allclose(es.v_plus, [r, r], atol=0) and np.allclose(es.v_minus, [r, -r], atol=0)
    assert abs(es.tau_plus - 1) < 1e-15


@settings(max_examples=150)
@given(st.floats(0, 7), st.floats(0.05, math.pi - 0.05) | st.floats(math.pi + 0.05, 2 * math.pi - 0.05))
def test_eigensystem_residuals(wt, phi):
    es = machine_eigensystem(1.0, wt, phi)
    t = symmetric_T(1.0, wt, phi)
    for tau, v in ((es.tau_plus, es.v_plus), (es.tau_minus, es.v_minus)):
        assert np.linalg.norm(t @ v - tau * v) < 1e-12
        assert abs(abs(tau) - 1) < 1e-12
    generic = np.sort_complex(np.linalg.eigvals(two_qubit_T(MachineParams.symmetric(1.0, wt, phi))))
    ours = np.sort_complex(np.array([es.tau_plus, es.tau_minus]))
    if abs(es.tau_plus - es.tau_minus) > 1e-6:
        assert np.max(np.abs(generic - ours)) < 1e-10


def test_eigenvalues_are_loop_phase_factors():
    for wt in np.linspace(0.1, 6.0, 13):
        for phi in (0.4, 1.5, 2.7, 4.0):
            es = machine_eigensystem(1.0, wt, phi)
            assert abs(es.tau_minus - looped_rotation_L(RotationLoopParams(1.0, phi, wt))) < 1e-12
            # cos -> -cos is a half-period shift
            assert abs(es.tau_plus + looped_rotation_L(RotationLoopParams(1.0, phi, wt + math.pi))) < 1e-12


def test_effective_hamiltonian_hermitian():
    h = effective_hamiltonian(TWO_PI, 0.1, math.pi / 2, 1e-5)
    assert hermitian_defect(h) < 1e-6


def test_effective_hamiltonian_second_order():
    d1 = hermitian_defect(effective_hamiltonian(TWO_PI, 0.1, math.pi / 2, 2e-3))
    d2 = hermitian_defect(effective_hamiltonian(TWO_PI, 0.1, math.pi / 2, 1e-3))
    assert 3.2 < d1 / d2 < 4.8


def test_effective_hamiltonian_against_symbolic_derivative():
    sympy = pytest.importorskip("sympy")
    t = sympy.symbols("t", real=True)
    e = sympy.exp(sympy.I * sympy.pi / 2)
    c = sympy.cos(2 * sympy.pi * t)
    d = 1 - e**2 * c**2
    diag = (1 - e**2) * c / d
    off = e * sympy.sin(2 * sympy.pi * t) ** 2 / d
    at = {t: sympy.Rational(1, 10)}
    a = complex(sympy.diff(diag, t).subs(at).evalf(30))
    b = complex(sympy.diff(off, t).subs(at).evalf(30))
    tdot = np.array([[a, b], [b, a]])
    exact = 1j * tdot @ symmetric_T(TWO_PI, 0.1, math.pi / 2).conj().T
    h = effective_hamiltonian(TWO_PI, 0.1, math.pi / 2, 1e-4)
    assert np.max(np.abs(h - exact)) < 1e-5
    assert hermitian_defect(exact) < 1e-12


def test_stone_group_law_fails():
    assert group_law_defect(TWO_PI, math.pi / 2, 0.1, 0.1) > 0.1
    w = stone_failure_witness()
    assert w is not None and w[2] > 0.1
    assert group_law_defect(TWO_PI, math.pi / 2, 0.0, 0.1) < 1e-12


def test_mz_probabilities():
    assert mz_time_probabilities(1) == pytest.approx((1, 0))
    assert mz_time_probabilities(-1) == pytest.approx((0, 1))
    assert mz_time_probabilities(1j) == pytest.approx((0.5, 0.5), abs=1e-15)
    with pytest.raises(ValidationError):
        mz_time_probabilities(0.5)


@given(st.floats(-10, 10))
def test_mz_probabilities_sum_to_one(a):
    assert abs(sum(mz_time_probabilities(cmath.exp(1j * a))) - 1) < 1e-12


def test_opened_mz():
    d = opened_mz_distribution()
    assert d.opened == pytest.approx((0.25, 0.25, 0.5), abs=1e-12)
    assert d.closed == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)
    assert abs(sum(d.opened) - 1) < 1e-12
    for opened in (True, False):
        assert unitarity_defect(mz_network(opened)) < 1e-12
    # the intact interferometer routes every port to itself
    assert np.allclose(np.abs(mz_network(False)) ** 2, np.eye(3), atol=1e-12)
