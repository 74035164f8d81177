"""Compiled and pure-Python kernels must agree; each is also checked against
an independent formulation."""
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from qloop import _kernels
from qloop._kernels import available_backends


def test_backend_selected():
    assert _kernels.BACKEND in available_backends()


def test_compiled_backend_is_built():
    # the editable install builds the extension; losing it silently would hide regressions
    assert "cython" in available_backends()


def test_env_var_forces_fallback():
    code = "from qloop import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, QLOOP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_series_partial_sum_matches_matrix_power(kernels, rng):
    def cplx(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    u00, lead, m, u10 = cplx(2, 2), cplx(2, 3), 0.3 * cplx(3, 3), cplx(3, 2)
    for n in (0, 1, 2, 7):
        expected = u00 + sum(lead @ np.linalg.matrix_power(m, k) @ u10 for k in range(n))
        assert np.allclose(kernels.series_partial_sum(u00, lead, m, u10, n), expected, rtol=1e-13, atol=1e-13)


def test_series_partial_sum_does_not_mutate(kernels):
    u00 = np.eye(2, dtype=complex)
    u10 = np.ones((2, 2), dtype=complex)
    kernels.series_partial_sum(u00, np.eye(2), 0.5 * np.eye(2), u10, 5)
    assert np.array_equal(u00, np.eye(2)) and np.array_equal(u10, np.ones((2, 2)))


def test_rotation_loop_phase_matches_formula(kernels):
    omega, phi = 2.3, 0.7
    t = np.linspace(-1, 3, 57)
    values, flags = kernels.rotation_loop_phase(omega, phi, t)
    c = np.cos(omega * t)
    expected = -np.exp(-1j * phi) * (np.exp(1j * phi) - c) / (np.exp(-1j * phi) - c)
    assert not flags.any()
    assert np.allclose(values, expected, rtol=0, atol=1e-14)


def test_rotation_loop_phase_flags_degenerate(kernels):
    # phi = 0 and cos(wt) = 1 makes the denominator vanish
    values, flags = kernels.rotation_loop_phase(1.0, 0.0, np.array([0.0, 1.0]))
    assert flags.tolist() == [True, False]
    assert np.isnan(values[0]) and np.isfinite(values[1])


def test_resonator_kernel_matches_formula(kernels):
    t, k, alpha = 0.8 * np.exp(0.3j), 0.6 * np.exp(-1.1j), 0.93
    theta = np.linspace(0, 2 * np.pi, 33)
    et1, ei2, et2, flags = kernels.resonator_fields_array(t, k, alpha, theta)
    em = np.exp(-1j * theta)
    assert not flags.any()
    assert np.allclose(et1, (-alpha + t * em) / (-alpha * np.conj(t) + em), atol=1e-14)
    assert np.allclose(ei2, -alpha * np.conj(k) / (-alpha * np.conj(t) + em), atol=1e-14)
    assert np.allclose(et2, -np.conj(k) / (1 - alpha * np.conj(t) * np.exp(1j * theta)), atol=1e-14)


def test_resonator_kernel_flags_resonance(kernels):
    _, _, _, flags = kernels.resonator_fields_array(1.0, 0.0, 1.0, np.array([0.0, 1.0]))
    assert flags.tolist() == [True, False]


def _ladder_products(x, cutoff):
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)
    one = np.eye(cutoff + 1)
    ops = [np.kron(a, one), np.kron(one, a)]
    return sum(ops[k].T @ ops[l] * x[k, l] for k in range(2) for l in range(2))


@pytest.mark.parametrize("cutoff", [1, 2, 5])
def test_jordan_matrix_matches_ladder_products(kernels, rng, cutoff):
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert np.allclose(kernels.jordan_matrix(x, cutoff), _ladder_products(x, cutoff), rtol=0, atol=1e-13)


def test_backends_agree_bitwise_on_sweeps():
    backends = available_backends()
    if len(backends) < 2:
        pytest.skip("compiled kernels not built")
    py, cy = backends["python"], backends["cython"]
    t = np.linspace(0, 2, 401)
    a, fa = py.rotation_loop_phase(2 * math.pi, math.pi / 2, t)
    b, fb = cy.rotation_loop_phase(2 * math.pi, math.pi / 2, t)
    assert np.array_equal(fa, fb)
    assert np.max(np.abs(a - b)) <= 4e-16
