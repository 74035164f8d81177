"""Worked examples in closed form: looped rotation, two-qubit time machine,
Mach-Zehnder probabilities and the opened interferometer.

Each closed form here has a generic counterpart in :mod:`qloop.loopcore`
(built from :func:`rotation` and :func:`phase_closure`) that the tests use
as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .blockops import Partition, PartitionedUnitary, loop_closure, swap_closure
from .errors import SingularityError, ValidationError
from .loopcore import elementary_loop, time_machine

DENOMINATOR_FLOOR = 1e-14
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PORTS = Partition.from_sizes(1, 1)


def _finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValidationError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class RotationLoopParams:
    omega: float = 2 * math.pi
    phi: float = math.pi / 2
    t: float = 0.0

    def __post_init__(self):
        _finite(omega=self.omega, phi=self.phi, t=self.t)


@dataclass(frozen=True)
class MachineParams:
    omega: float
    t: float
    omega_prime: float
    t_prime: float
    phi: float
    phi_prime: float

    def __post_init__(self):
        _finite(
            omega=self.omega, t=self.t, omega_prime=self.omega_prime,
            t_prime=self.t_prime, phi=self.phi, phi_prime=self.phi_prime,
        )

    @classmethod
    def symmetric(cls, omega, t, phi):
        return cls(omega, t, omega, t, phi, phi)


def rotation(angle: float) -> np.ndarray:
    """Real 2x2 rotation ``[[cos, sin], [-sin, cos]]``."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]], dtype=complex)


def looped_rotation_L(p: RotationLoopParams) -> complex:
    """Phase factor of a rotation whose second component is looped with phase ``phi``."""
    c = math.cos(p.omega * p.t)
    e = complex(math.cos(p.phi), math.sin(p.phi))
    den = e.conjugate() - c
    if abs(den) < DENOMINATOR_FLOOR:
        raise SingularityError(f"degenerate looped rotation: |e^(-i phi) - cos wt| = {abs(den):.2e}", abs(den))
    return -e.conjugate() * (e - c) / den


def looped_rotation_generic(p: RotationLoopParams):
    """Same quantity via :func:`~qloop.loopcore.elementary_loop`; returns the LoopResult."""
    u = PartitionedUnitary(rotation(p.omega * p.t), PORTS)
    return elementary_loop(u, [[complex(math.cos(p.phi), math.sin(p.phi))]])


class SweepRow(NamedTuple):
    t: float
    re: float
    im: float
    flag: bool


def halfpipe_sweep(omega=2 * math.pi, phi=math.pi / 2, t_min=0.0, t_max=2.0, n_samples=401) -> list[SweepRow]:
    """Uniform sweep of the looped-rotation phase factor over ``[t_min, t_max]``.

    Degenerate samples are kept with ``flag=True`` and ``nan`` values.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    if not (math.isfinite(t_min) and math.isfinite(t_max)) or t_max <= t_min:
        raise ValueError(f"bad time range [{t_min}, {t_max}]")
    _finite(omega=omega, phi=phi)
    ts = np.linspace(t_min, t_max, int(n_samples))
    values, flags = _kernels.rotation_loop_phase(float(omega), float(phi), ts)
    return [SweepRow(float(t), float(v.real), float(v.imag), bool(f)) for t, v, f in zip(ts, values, flags)]


def two_qubit_T(p: MachineParams) -> np.ndarray:
    """Explicit 2x2 time machine made of two rotations and a phase NOT."""
    c, s = math.cos(p.omega * p.t), math.sin(p.omega * p.t)
    c_, s_ = math.cos(p.omega_prime * p.t_prime), math.sin(p.omega_prime * p.t_prime)
    e_sum = complex(math.cos(p.phi + p.phi_prime), math.sin(p.phi + p.phi_prime))
    den = 1.0 - e_sum * c * c_
    if abs(den) < DENOMINATOR_FLOOR:
        raise SingularityError(f"two-qubit machine denominator vanishes ({abs(den):.2e})", abs(den))
    e, e_ = complex(math.cos(p.phi), math.sin(p.phi)), complex(math.cos(p.phi_prime), math.sin(p.phi_prime))
    return np.array(
        [[c - e_sum * c_, e_ * s * s_], [e * s * s_, c_ - e_sum * c]],
        dtype=complex,
    ) / den


def two_qubit_T_generic(p: MachineParams):
    """Same machine via :func:`~qloop.loopcore.time_machine`; returns the MachineResult."""
    u = PartitionedUnitary(rotation(p.omega * p.t), PORTS)
    v = PartitionedUnitary(rotation(p.omega_prime * p.t_prime), PORTS)
    w = swap_closure(PORTS, [[complex(math.cos(p.phi), math.sin(p.phi))]],
                     [[complex(math.cos(p.phi_prime), math.sin(p.phi_prime))]])
    return time_machine(u, v, w)


def symmetric_T(omega, t, phi) -> np.ndarray:
    """Symmetric machine (equal rotations and phases) as ``c(t) 1 + s(t) sigma_1``."""
    c = math.cos(omega * t)
    e = complex(math.cos(phi), math.sin(phi))
    den = 1.0 - e * e * c * c
    if abs(den) < DENOMINATOR_FLOOR:
        raise SingularityError(f"symmetric machine denominator vanishes ({abs(den):.2e})", abs(den))
    diag = (1.0 - e * e) * c / den
    off = e * math.sin(omega * t) ** 2 / den
    return diag * np.eye(2) + off * SIGMA1


class Eigensystem(NamedTuple):
    tau_plus: complex
    tau_minus: complex
    v_plus: np.ndarray
    v_minus: np.ndarray


def machine_eigensystem(omega, t, phi) -> Eigensystem:
    """Eigenpairs of the symmetric machine.

    The eigenvectors ``(1, +-1)/sqrt 2`` do not depend on the parameters; the
    eigenvalues are elementary-loop phase factors.
    """
    c = math.cos(omega * t)
    e = complex(math.cos(phi), math.sin(phi))
    taus = []
    for sign in (1.0, -1.0):
        den = e.conjugate() + sign * c
        if abs(den) < DENOMINATOR_FLOOR:
            raise SingularityError(f"degenerate eigenvalue denominator ({abs(den):.2e})", abs(den))
        taus.append(sign * e.conjugate() * (e + sign * c) / den)
    r = 1 / math.sqrt(2.0)
    return Eigensystem(taus[0], taus[1], np.array([r, r], dtype=complex), np.array([r, -r], dtype=complex))


def effective_hamiltonian(omega, t, phi, dt=1e-5) -> np.ndarray:
    """``H = i (dT/dt) T^†`` with a central difference of step ``dt``.

    ``H`` is Hermitian only up to the O(dt^2) stencil error.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    t_dot = (symmetric_T(omega, t + dt, phi) - symmetric_T(omega, t - dt, phi)) / (2 * dt)
    return 1j * t_dot @ symmetric_T(omega, t, phi).conj().T


def hermitian_defect(h) -> float:
    return float(np.linalg.norm(h - h.conj().T))


def group_law_defect(omega, phi, t1, t2) -> float:
    """``||T(t1) T(t2) - T(t1 + t2)||_F``; zero for a one-parameter group."""
    return float(np.linalg.norm(
        symmetric_T(omega, t1, phi) @ symmetric_T(omega, t2, phi) - symmetric_T(omega, t1 + t2, phi)
    ))


def stone_failure_witness(omega=2 * math.pi, phi=math.pi / 2, threshold=0.1, grid=None):
    """First ``(t1, t2, defect)`` on a grid with group-law defect above ``threshold``, else None."""
    grid = np.linspace(0.05, 0.45, 9) if grid is None else grid
    for t1 in grid:
        for t2 in grid:
            try:
                d = group_law_defect(omega, phi, float(t1), float(t2))
            except SingularityError:
                continue
            if d > threshold:
                return float(t1), float(t2), d
    return None


def mz_time_probabilities(l00: complex, tol: float = 1e-9) -> tuple[float, float]:
    """Detection probabilities at the two outputs of the timelike Mach-Zehnder."""
    l00 = complex(l00)
    if abs(abs(l00) - 1.0) > tol:
        raise ValidationError(f"L00 must be unimodular, |L00| = {abs(l00):.12g}")
    return abs(1 + l00) ** 2 / 4, abs(1 - l00) ** 2 / 4


# 50/50 beam splitter; the closed interferometer is BS @ BS = identity.
BEAM_SPLITTER = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _embed(two_mode, modes, n=3) -> np.ndarray:
    out = np.eye(n, dtype=complex)
    out[np.ix_(modes, modes)] = two_mode
    return out


def mz_network(opened: bool) -> np.ndarray:
    """3-mode unitary of the Mach-Zehnder; mode 2 is the extra output.

    Opening the interferometer (removing the upper mirror) routes the upper
    internal path (mode 1 after the first splitter) to output 2, while the
    second splitter receives the empty mode 2 in its place.
    """
    bs = _embed(BEAM_SPLITTER, [0, 1])
    middle = _embed(SIGMA1, [1, 2]) if opened else np.eye(3, dtype=complex)
    return bs @ middle @ bs


class OpenedMZ(NamedTuple):
    opened: tuple[float, float, float]
    closed: tuple[float, float, float]


def opened_mz_distribution(input_port: int = 0) -> OpenedMZ:
    """Output distributions of the opened and the intact interferometer."""
    psi = np.zeros(3, dtype=complex)
    psi[input_port] = 1.0
    out = {}
    for opened in (True, False):
        p = np.abs(mz_network(opened) @ psi) ** 2
        out[opened] = tuple(float(x) for x in p)
    return OpenedMZ(out[True], out[False])


def loop_closure_for_phase(phi) -> np.ndarray:
    """``diag(1, e^{i phi})``: the elementary loop closure on two ports."""
    return loop_closure(PORTS, [[complex(math.cos(phi), math.sin(phi))]])
