"""Two-mode bosonic Fock space with a hard per-mode cutoff.

Single-particle 2x2 gates are lifted with the Jordan map
``x -> sum_kl a_k^† x_kl a_l``.  Lifted generators conserve the total number
``n0 + n1``, so every operator built here is block diagonal in total number;
blocks with total number ``<= cutoff`` are complete and carry no truncation
error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.linalg

from . import _kernels
from .blockops import as_matrix, unitarity_defect
from .errors import DimensionError, ValidationError
from .gallery import SIGMA1, machine_eigensystem, symmetric_T
from .serialize import complex_from_json

DEFAULT_CUTOFF = 6
BRANCH_GUARD = 1e-8


@dataclass(frozen=True)
class FockSpace:
    """Occupation basis ``(n0, n1)``, ``0 <= n_k <= cutoff``, in lexicographic order."""

    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        if int(self.cutoff) < 1:
            raise DimensionError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** 2

    @cached_property
    def basis(self) -> tuple:
        side = range(self.cutoff + 1)
        return tuple((n0, n1) for n0 in side for n1 in side)

    def index(self, n0: int, n1: int) -> int:
        if not (0 <= n0 <= self.cutoff and 0 <= n1 <= self.cutoff):
            raise DimensionError(f"occupation ({n0}, {n1}) outside cutoff {self.cutoff}")
        return n0 * (self.cutoff + 1) + n1

    @cached_property
    def total_number(self) -> np.ndarray:
        return np.array([n0 + n1 for n0, n1 in self.basis])

    def sector(self, n: int) -> np.ndarray:
        """Basis indices with total number ``n``."""
        return np.flatnonzero(self.total_number == n)

    def safe_indices(self, max_total: int | None = None) -> np.ndarray:
        """Indices with total number ``<= max_total`` (default ``cutoff - 1``)."""
        m = self.cutoff - 1 if max_total is None else max_total
        return np.flatnonzero(self.total_number <= m)

    def ket(self, n0: int, n1: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n0, n1)] = 1.0
        return v

    def vacuum(self) -> np.ndarray:
        return self.ket(0, 0)


@dataclass(frozen=True)
class FockOperator:
    space: FockSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise DimensionError(f"operator shape {m.shape} does not match space dimension {self.space.dim}")
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "FockOperator":
        return FockOperator(self.space, self.matrix.conj().T)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            if other.space != self.space:
                raise DimensionError("operators live on different spaces")
            return FockOperator(self.space, self.matrix @ other.matrix)
        return apply(self, other)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.space, self.matrix - other.matrix)

    def restrict(self, indices) -> np.ndarray:
        idx = np.asarray(indices)
        return self.matrix[np.ix_(idx, idx)]


def _single_mode(cutoff: int, kind: str) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)
    if kind == "annihilate":
        return a
    if kind == "create":
        return a.T.copy()
    raise ValueError(f"kind must be 'create' or 'annihilate', got {kind!r}")


def ladder(space: FockSpace, mode: int, kind: str) -> FockOperator:
    """Creation or annihilation operator on one mode, built from matrix elements.

    ``a^†|n> = sqrt(n+1)|n+1>`` with the image of the top occupation dropped.
    """
    if mode not in (0, 1):
        raise DimensionError(f"mode must be 0 or 1, got {mode!r}")
    if kind not in ("create", "annihilate"):
        raise ValueError(f"kind must be 'create' or 'annihilate', got {kind!r}")
    m = np.zeros((space.dim, space.dim), dtype=complex)
    for j, occ in enumerate(space.basis):
        n = occ[mode]
        target = list(occ)
        if kind == "annihilate":
            if n == 0:
                continue
            target[mode] = n - 1
            amp = math.sqrt(n)
        else:
            if n == space.cutoff:
                continue
            target[mode] = n + 1
            amp = math.sqrt(n + 1)
        m[space.index(*target), j] = amp
    return FockOperator(space, m)


def number_operator(space: FockSpace) -> FockOperator:
    return FockOperator(space, np.diag(space.total_number.astype(complex)))


def jordan_map(x, space: FockSpace) -> FockOperator:
    """Lift a 2x2 single-particle matrix to ``sum_kl a_k^† x_kl a_l``."""
    x = as_matrix(x, "x")
    if x.shape != (2, 2):
        raise DimensionError(f"Jordan map needs a 2x2 matrix, got {x.shape}")
    return FockOperator(space, _kernels.jordan_matrix(x, space.cutoff))


def unitary_log(u, guard: float = BRANCH_GUARD):
    """Principal anti-Hermitian logarithm of a unitary matrix.

    Uses the complex Schur form (diagonal for normal matrices) and takes
    eigenphases in ``(-pi, pi]``.  Returns ``(x, near_branch_cut)`` where the
    flag reports an eigenvalue within ``guard`` of ``-1``.
    """
    u = as_matrix(u)
    d, z = scipy.linalg.schur(u, output="complex")
    ev = np.diagonal(d)
    phases = np.angle(ev)
    # np.angle gives -pi for -1 - 0j; fold onto +pi
    phases = np.where(phases <= -math.pi + 1e-15, math.pi, phases)
    x = (z * (1j * phases)) @ z.conj().T
    x = 0.5 * (x - x.conj().T)
    near_cut = bool(np.any(np.abs(ev + 1.0) < guard))
    return x, near_cut


def _sector_expm(generator: FockOperator) -> np.ndarray:
    space = generator.space
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for n in range(2 * space.cutoff + 1):
        idx = space.sector(n)
        out[np.ix_(idx, idx)] = scipy.linalg.expm(generator.restrict(idx))
    return out


def second_quantized_gate(tprime, space: FockSpace, tol: float = 1e-10) -> FockOperator:
    """Fock-space operator of a single-particle 2x2 unitary.

    Exponentiates the Jordan lift of the principal logarithm of ``tprime``
    sector by sector in total number, so number conservation and
    ``T|0) = |0)`` hold exactly.
    """
    tprime = as_matrix(tprime, "T'")
    if tprime.shape != (2, 2):
        raise DimensionError(f"T' must be 2x2, got {tprime.shape}")
    defect = unitarity_defect(tprime)
    if defect > tol:
        raise ValidationError(f"T' is not unitary: defect {defect:.3e}")
    x, _ = unitary_log(tprime)
    return FockOperator(space, _sector_expm(jordan_map(x, space)))


def generator_gate(x, space: FockSpace) -> FockOperator:
    """``exp(x_hat)`` for an anti-Hermitian 2x2 generator ``x``."""
    return FockOperator(space, _sector_expm(jordan_map(x, space)))


class MachinePhases(NamedTuple):
    Phi0: float
    Phi1: float
    root_sign: int
    branch_warning: bool


def machine_phases(omega, t, phi) -> MachinePhases:
    """Exponential form ``T = e^{i Phi0} exp(i Phi1 sigma_1)`` of the symmetric machine.

    ``Phi1 = arctan(sin(wt) tan(wt) / (2 sin phi))`` on the principal branch.
    ``e^{i Phi0}`` is a square root of ``tau_+ tau_-``; the principal root is
    used unless the other root is needed to reproduce ``T`` with the
    principal ``Phi1`` (this happens when ``cos(wt) < 0``), in which case
    ``root_sign = -1``.
    """
    wt = omega * t
    c, s, sp = math.cos(wt), math.sin(wt), math.sin(phi)
    warning = abs(c) < BRANCH_GUARD or abs(sp) < BRANCH_GUARD
    # sin(wt) tan(wt) / (2 sin phi) == num / den
    num, den = s * s, 2.0 * sp * c
    if den == 0.0:
        phi1 = math.pi / 2 if num > 0 else 0.0
    else:
        phi1 = math.atan(num / den)
    es = machine_eigensystem(omega, t, phi)
    root = np.sqrt(complex(es.tau_plus * es.tau_minus))
    diag = symmetric_T(omega, t, phi)[0, 0]
    # T00 = e^{i Phi0} cos(Phi1) with cos(Phi1) > 0 on the principal branch
    sign = 1 if (root.conjugate() * diag).real >= 0 else -1
    return MachinePhases(float(np.angle(sign * root)), phi1, sign, warning)


def exponential_form(phases: MachinePhases) -> np.ndarray:
    return np.exp(1j * phases.Phi0) * scipy.linalg.expm(1j * phases.Phi1 * SIGMA1)


class TensorOscillatorRep(NamedTuple):
    """Two distinguishable oscillators: ``a0 = a (x) 1``, ``a1 = 1 (x) a``."""

    space: FockSpace
    a: np.ndarray
    a0: FockOperator
    a1: FockOperator
    a0_dag: FockOperator
    a1_dag: FockOperator

    def ket(self, n0: int, n1: int) -> np.ndarray:
        e0 = np.zeros(self.space.cutoff + 1, dtype=complex)
        e1 = np.zeros(self.space.cutoff + 1, dtype=complex)
        e0[n0] = e1[n1] = 1.0
        return np.kron(e0, e1)

    def vacuum(self) -> np.ndarray:
        return self.ket(0, 0)

    def interaction(self) -> FockOperator:
        """``a^† (x) a + a (x) a^†``."""
        a, ad = self.a, self.a.conj().T
        return FockOperator(self.space, np.kron(ad, a) + np.kron(a, ad))


def tensor_oscillator_rep(single_cutoff: int) -> TensorOscillatorRep:
    if single_cutoff < 1:
        raise DimensionError(f"single_cutoff must be >= 1, got {single_cutoff}")
    space = FockSpace(single_cutoff)
    a = _single_mode(single_cutoff, "annihilate")
    one = np.eye(single_cutoff + 1)
    a0 = FockOperator(space, np.kron(a, one))
    a1 = FockOperator(space, np.kron(one, a))
    return TensorOscillatorRep(space, a, a0, a1, a0.dag(), a1.dag())


def apply(op: FockOperator, state) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape != (op.space.dim,):
        raise DimensionError(f"state has shape {state.shape}, space dimension is {op.space.dim}")
    return op.matrix @ state


def state_to_json(space: FockSpace, state, atol: float = 0.0) -> list:
    """Sparse ``[{"n0", "n1", "amp": [re, im]}]`` listing of a state vector."""
    state = np.asarray(state, dtype=complex)
    return [
        {"n0": n0, "n1": n1, "amp": [float(a.real), float(a.imag)]}
        for (n0, n1), a in zip(space.basis, state)
        if abs(a) > atol
    ]


def state_from_json(space: FockSpace, items) -> np.ndarray:
    v = np.zeros(space.dim, dtype=complex)
    try:
        for i, item in enumerate(items):
            v[space.index(int(item["n0"]), int(item["n1"]))] += complex_from_json(item["amp"], f"state[{i}].amp")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"state: malformed entry ({exc})") from exc
    return v
