"""Closed-form maps for looped unitaries.

``elementary_loop`` feeds port 1 of a unitary ``U`` back into itself
through a unitary ``W11``; ``time_machine`` couples two unitaries ``U``,
``U'`` through an off-diagonal closure ``W = W01 + W10``.  Resolvents
``(1 - A)^{-1}`` are always applied with a linear solve, never by forming
the inverse.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .blockops import (
    DEFAULT_TOL,
    Partition,
    PartitionedUnitary,
    as_matrix,
    assemble,
    split_blocks,
    unitarity_defect,
)
from .errors import DimensionError, NumericalError, SingularityError, ValidationError

SINGULAR_THRESHOLD = 1e-12

__all__ = [
    "SINGULAR_THRESHOLD",
    "LoopResult",
    "MachineResult",
    "elementary_loop",
    "elementary_loop_series",
    "series_terms_for",
    "spectral_radius",
    "time_machine",
    "s_form",
]


def _smallest_singular_value(a: np.ndarray) -> float:
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def _resolvent_solve(a: np.ndarray, rhs: np.ndarray, threshold: float, what: str):
    """Solve ``(1 - a) x = rhs``; returns ``(x, smallest singular value of 1 - a)``."""
    lhs = np.eye(a.shape[0]) - a
    smin = _smallest_singular_value(lhs)
    if smin <= threshold:
        raise SingularityError(
            f"resolvent {what} is singular: smallest singular value {smin:.3e} <= {threshold:.1e}",
            value=smin,
        )
    return np.linalg.solve(lhs, rhs), smin


def _check_w11(w11, partition: Partition, tol: float) -> np.ndarray:
    w11 = as_matrix(w11, "W11")
    n1 = partition.sizes[1]
    if w11.shape != (n1, n1):
        raise DimensionError(f"W11 must be {n1}x{n1}, got {w11.shape}")
    defect = unitarity_defect(w11)
    if defect > tol:
        raise ValidationError(f"W11 is not unitary: ||W11 W11^† - I||_F = {defect:.3e}")
    return w11


def _matrix_json(m):
    from .serialize import matrix_to_json

    return matrix_to_json(m)


@dataclass(frozen=True)
class LoopResult:
    """Output of :func:`elementary_loop`.

    ``L00`` maps port-0 input to port-0 output; ``internal_out`` maps port-0
    input to the port-1 output circulating inside the loop.
    """

    L00: np.ndarray
    internal_out: np.ndarray
    smallest_singular_value: float
    unitarity_defect: float
    form_discrepancy: float
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "L00": _matrix_json(self.L00),
            "internal_out": _matrix_json(self.internal_out),
            "smallest_singular_value": self.smallest_singular_value,
            "unitarity_defect": self.unitarity_defect,
            "form_discrepancy": self.form_discrepancy,
            "degenerate": self.degenerate,
        }


def elementary_loop(
    u: PartitionedUnitary,
    w11,
    tol: float = DEFAULT_TOL,
    threshold: float = SINGULAR_THRESHOLD,
) -> LoopResult:
    """Close port 1 of ``u`` on itself through the unitary ``w11``.

    Evaluates ``L00 = U00 + U01 W11 (1 - U11 W11)^{-1} U10`` and, as an
    internal check, the pushed-through form
    ``U00 + U01 (1 - W11 U11)^{-1} W11 U10``.

    If the resolvent is singular but ``U01`` and ``U10`` are exactly zero the
    loop is decoupled from port 0 and ``L00 = U00`` is returned with
    ``degenerate=True``; otherwise :class:`SingularityError` is raised.
    """
    w11 = _check_w11(w11, u.partition, tol)
    (u00, u01), (u10, u11) = u.blocks()
    n1 = u11.shape[0]
    lhs = np.eye(n1) - u11 @ w11
    smin = _smallest_singular_value(lhs)
    if smin <= threshold:
        if not np.any(u01) and not np.any(u10):
            return LoopResult(
                L00=u00,
                internal_out=np.zeros_like(u10),
                smallest_singular_value=smin,
                unitarity_defect=unitarity_defect(u00),
                form_discrepancy=0.0,
                degenerate=True,
            )
        raise SingularityError(
            f"1 - U11 W11 is singular: smallest singular value {smin:.3e} <= {threshold:.1e}",
            value=smin,
        )
    internal = np.linalg.solve(lhs, u10)
    l_a = u00 + u01 @ w11 @ internal
    l_b = u00 + u01 @ np.linalg.solve(np.eye(n1) - w11 @ u11, w11 @ u10)
    discrepancy = float(np.linalg.norm(l_a - l_b))
    defect = unitarity_defect(l_a)
    if discrepancy > tol or defect > tol:
        raise NumericalError(
            f"loop map failed its cross-checks (form discrepancy {discrepancy:.3e}, "
            f"unitarity defect {defect:.3e}, smallest singular value {smin:.3e})"
        )
    return LoopResult(l_a, internal, smin, defect, discrepancy)


def elementary_loop_series(u: PartitionedUnitary, w11, n_terms: int) -> np.ndarray:
    """Partial sum ``U00 + sum_{n<n_terms} U01 W11 (U11 W11)^n U10``.

    Term ``n`` is the contribution of ``n`` extra round trips through the
    loop.  No convergence check is made; see :func:`spectral_radius`.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    w11 = as_matrix(w11, "W11")
    (u00, u01), (u10, u11) = u.blocks()
    if w11.shape != (u11.shape[0], u11.shape[0]):
        raise DimensionError(f"W11 must be {u11.shape[0]}x{u11.shape[0]}, got {w11.shape}")
    return _kernels.series_partial_sum(u00, u01 @ w11, u11 @ w11, u10, int(n_terms))


def series_terms_for(rho: float, target: float = 1e-10, margin: float = 1.5, cap: int = 200_000) -> int:
    """Number of series terms after which ``rho**n`` (safety factor included) drops below ``target``."""
    if rho <= 0.0:
        return 1
    if rho >= 1.0:
        raise ValueError("series diverges for spectral radius >= 1")
    n = np.log(target * (1.0 - rho)) / np.log(rho)
    return int(min(cap, np.ceil(margin * n) + 50))


def spectral_radius(m) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {m.shape}")
    try:
        ev = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation failed: {exc}") from exc
    return float(np.max(np.abs(ev)))


@dataclass(frozen=True)
class MachineResult:
    """Output of :func:`time_machine`: ``T`` on the full space and ``S = T W``."""

    T: np.ndarray
    S: np.ndarray
    resolvent0_smallest_sv: float
    resolvent1_smallest_sv: float
    unitarity_defect_T: float
    unitarity_defect_S: float
    s_consistency: float

    def to_json(self) -> dict:
        return {
            "T": _matrix_json(self.T),
            "S": _matrix_json(self.S),
            "resolvent0_smallest_sv": self.resolvent0_smallest_sv,
            "resolvent1_smallest_sv": self.resolvent1_smallest_sv,
            "unitarity_defect_T": self.unitarity_defect_T,
            "unitarity_defect_S": self.unitarity_defect_S,
            "s_consistency": self.s_consistency,
        }


def _swap_blocks(w, partition: Partition, tol: float):
    w = as_matrix(w, "W")
    if w.shape != (partition.total_dim, partition.total_dim):
        raise DimensionError(f"W has shape {w.shape}, partition dimension is {partition.total_dim}")
    (w00, w01), (w10, w11) = split_blocks(w, partition)
    if w00.shape != w11.shape:
        raise DimensionError("time machine needs equal port sizes")
    if np.linalg.norm(w00) > tol or np.linalg.norm(w11) > tol:
        raise ValidationError("W must be off-diagonal (W = W01 + W10)")
    defect = unitarity_defect(w)
    if defect > tol:
        raise ValidationError(f"W is not unitary: defect {defect:.3e}")
    return w, w01, w10


def time_machine(
    u: PartitionedUnitary,
    uprime: PartitionedUnitary,
    w,
    tol: float = DEFAULT_TOL,
    threshold: float = SINGULAR_THRESHOLD,
) -> MachineResult:
    """Two unitaries looped through each other by ``W = W01 + W10``.

    The ports of ``T`` are port 0 of ``u`` and port 1 of ``uprime``; ``T`` is
    returned assembled on the shared partition.
    """
    p = u.partition
    if uprime.partition != p:
        raise DimensionError("U and U' must share one partition")
    w, w01, w10 = _swap_blocks(w, p, tol)
    (u00, u01), (u10, u11) = u.blocks()
    (v00, v01), (v10, v11) = uprime.blocks()

    # r0 acts on port 0 of U', r1 on port 1 of U
    r0 = v00 @ w01 @ u11 @ w10
    r1 = u11 @ w10 @ v00 @ w01
    x0, s0 = _resolvent_solve(r0, np.hstack([v00 @ w01 @ u10, v01]), threshold, "1 - U'00 W U11 W")
    x1, s1 = _resolvent_solve(r1, np.hstack([u10, u11 @ w10 @ v01]), threshold, "1 - U11 W U'00 W")
    n0 = u10.shape[1]
    t00 = u00 + u01 @ w10 @ x0[:, :n0]
    t01 = u01 @ w10 @ x0[:, n0:]
    t10 = v10 @ w01 @ x1[:, :n0]
    t11 = v11 + v10 @ w01 @ x1[:, n0:]
    t = assemble([[t00, t01], [t10, t11]], p)

    s = s_form(
        PartitionedUnitary(u.matrix @ w, p, tol=tol),
        PartitionedUnitary(uprime.matrix @ w, p, tol=tol),
        threshold=threshold,
    )
    dt, ds = unitarity_defect(t), unitarity_defect(s)
    consistency = float(np.linalg.norm(s - t @ w))
    if dt > tol or ds > tol or consistency > tol:
        raise NumericalError(
            f"time machine failed its cross-checks (T defect {dt:.3e}, S defect {ds:.3e}, "
            f"||S - T W|| = {consistency:.3e})"
        )
    return MachineResult(t, s, s0, s1, dt, ds, consistency)


def s_form(x: PartitionedUnitary, xprime: PartitionedUnitary, threshold: float = SINGULAR_THRESHOLD) -> np.ndarray:
    """The time machine rewritten in terms of ``X = U W`` and ``X' = U' W``.

    With blocks ``[[a, b], [c, d]]`` of ``X`` and primed blocks of ``X'``::

        S = [[a (1-b'c)^-1 a',       b + a (1-b'c)^-1 b' d],
             [c' + d' (1-cb')^-1 c a', d' (1-cb')^-1 d      ]]
    """
    p = x.partition
    if xprime.partition != p:
        raise DimensionError("X and X' must share one partition")
    (a, b), (c, d) = x.blocks()
    (a_, b_), (c_, d_) = xprime.blocks()
    y0, _ = _resolvent_solve(b_ @ c, np.hstack([a_, b_ @ d]), threshold, "1 - b'c")
    y1, _ = _resolvent_solve(c @ b_, np.hstack([c @ a_, d]), threshold, "1 - cb'")
    n0 = a_.shape[1]
    s00 = a @ y0[:, :n0]
    s01 = b + a @ y0[:, n0:]
    s10 = c_ + d_ @ y1[:, :n0]
    s11 = d_ @ y1[:, n0:]
    return assemble([[s00, s01], [s10, s11]], p)
