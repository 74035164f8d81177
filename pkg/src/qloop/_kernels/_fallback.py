"""Pure-Python/numpy reference versions of the hot kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and semantics; the test-suite checks them against each other.
"""
import math

import numpy as np

# |denominator| below this marks a degenerate sample
DEGENERATE = 1e-14


def series_partial_sum(u00, lead, m, u10, n_terms):
    """``u00 + sum_{n=0}^{n_terms-1} lead @ m**n @ u10``."""
    acc = np.array(u00, dtype=complex)
    v = np.array(u10, dtype=complex)
    lead = np.asarray(lead, dtype=complex)
    m = np.asarray(m, dtype=complex)
    for _ in range(int(n_terms)):
        acc += lead @ v
        v = m @ v
    return acc


def rotation_loop_phase(omega, phi, t):
    """Looped-rotation phase factor sampled at each entry of ``t``.

    Returns ``(values, flags)``; flagged samples hold ``nan``.
    """
    t = np.asarray(t, dtype=float)
    values = np.empty(t.shape, dtype=complex)
    flags = np.zeros(t.shape, dtype=bool)
    e_plus = complex(math.cos(phi), math.sin(phi))
    e_minus = e_plus.conjugate()
    for i, ti in enumerate(t.flat):
        c = math.cos(omega * ti)
        den = e_minus - c
        if abs(den) < DEGENERATE:
            flags.flat[i] = True
            values.flat[i] = complex(math.nan, math.nan)
        else:
            values.flat[i] = -e_minus * (e_plus - c) / den
    return values, flags


def resonator_fields_array(t_coupling, kappa, alpha, theta):
    """Ring-resonator fields (E_t1, E_i2, E_t2) for unit input, per ``theta`` sample."""
    theta = np.asarray(theta, dtype=float)
    et1 = np.empty(theta.shape, dtype=complex)
    ei2 = np.empty(theta.shape, dtype=complex)
    et2 = np.empty(theta.shape, dtype=complex)
    flags = np.zeros(theta.shape, dtype=bool)
    t = complex(t_coupling)
    tb = t.conjugate()
    kb = complex(kappa).conjugate()
    nan = complex(math.nan, math.nan)
    for i, th in enumerate(theta.flat):
        em = complex(math.cos(th), -math.sin(th))
        ep = em.conjugate()
        d1 = -alpha * tb + em
        d2 = 1.0 - alpha * tb * ep
        if abs(d1) < DEGENERATE or abs(d2) < DEGENERATE:
            flags.flat[i] = True
            et1.flat[i] = ei2.flat[i] = et2.flat[i] = nan
            continue
        et1.flat[i] = (-alpha + t * em) / d1
        ei2.flat[i] = -alpha * kb / d1
        et2.flat[i] = -kb / d2
    return et1, ei2, et2, flags


def jordan_matrix(x, cutoff):
    """Matrix of ``sum_kl a_k^† x_kl a_l`` on the truncated two-mode occupation basis.

    Basis index of ``(n0, n1)`` is ``n0 * (cutoff + 1) + n1``.
    """
    x = np.asarray(x, dtype=complex)
    c = int(cutoff)
    side = c + 1
    out = np.zeros((side * side, side * side), dtype=complex)
    for n0 in range(side):
        for n1 in range(side):
            j = n0 * side + n1
            out[j, j] += x[0, 0] * n0 + x[1, 1] * n1
            if n1 > 0 and n0 < c:
                out[(n0 + 1) * side + n1 - 1, j] += x[0, 1] * math.sqrt(n1 * (n0 + 1))
            if n0 > 0 and n1 < c:
                out[(n0 - 1) * side + n1 + 1, j] += x[1, 0] * math.sqrt(n0 * (n1 + 1))
    return out
