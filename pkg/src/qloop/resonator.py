"""Single ring resonator with round-trip damping.

Coupler ``[[t, kappa], [-conj(kappa), conj(t)]]``, feedback
``E_i2 = alpha e^{i theta} E_t2`` and unit input ``E_i1 = 1``.  For
``alpha = 1`` this is an elementary loop and :func:`crosscheck_lossless`
compares the two evaluations.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .blockops import Partition, PartitionedUnitary
from .errors import SingularityError, ValidationError
from .loopcore import elementary_loop

COUPLING_TOL = 1e-10


@dataclass(frozen=True)
class ResonatorParams:
    t_coupling: complex
    kappa: complex
    alpha: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t_coupling", complex(self.t_coupling))
        object.__setattr__(self, "kappa", complex(self.kappa))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", float(self.theta))
        norm = abs(self.t_coupling) ** 2 + abs(self.kappa) ** 2
        if abs(norm - 1.0) > COUPLING_TOL:
            raise ValidationError(f"|t|^2 + |kappa|^2 = {norm:.12g}, expected 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not math.isfinite(self.theta):
            raise ValidationError("theta must be finite")

    @classmethod
    def from_angle(cls, coupling_angle, t_phase=0.0, kappa_phase=0.0, alpha=1.0, theta=0.0):
        """Parametrise ``|t| = cos``, ``|kappa| = sin`` of ``coupling_angle``."""
        return cls(
            math.cos(coupling_angle) * cmath.exp(1j * t_phase),
            math.sin(coupling_angle) * cmath.exp(1j * kappa_phase),
            alpha,
            theta,
        )

    def coupler(self) -> np.ndarray:
        t, k = self.t_coupling, self.kappa
        return np.array([[t, k], [-k.conjugate(), t.conjugate()]], dtype=complex)


class ResonatorFields(NamedTuple):
    E_t1: complex
    E_i2: complex
    E_t2: complex


def resonator_fields(p: ResonatorParams) -> ResonatorFields:
    """Through field ``E_t1``, re-injected field ``E_i2`` and circulating field ``E_t2``."""
    et1, ei2, et2, flags = _kernels.resonator_fields_array(p.t_coupling, p.kappa, p.alpha, np.array([p.theta]))
    if flags[0]:
        raise SingularityError(
            f"resonance singularity at alpha={p.alpha}, |t|={abs(p.t_coupling)}, theta={p.theta}",
            value=abs(1.0 - p.alpha * p.t_coupling.conjugate() * cmath.exp(1j * p.theta)),
        )
    return ResonatorFields(complex(et1[0]), complex(ei2[0]), complex(et2[0]))


@dataclass(frozen=True)
class CrosscheckReport:
    L00: complex
    E_t1: complex
    internal_out: complex
    E_t2: complex
    deviation_through: float
    deviation_internal: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviation_through, self.deviation_internal)

    def to_json(self) -> dict:
        from .serialize import complex_to_json

        return {
            "L00": complex_to_json(self.L00),
            "E_t1": complex_to_json(self.E_t1),
            "internal_out": complex_to_json(self.internal_out),
            "E_t2": complex_to_json(self.E_t2),
            "deviation_through": self.deviation_through,
            "deviation_internal": self.deviation_internal,
        }


def crosscheck_lossless(p: ResonatorParams) -> CrosscheckReport:
    """Evaluate the lossless resonator both as fields and as an elementary loop."""
    if p.alpha != 1.0:
        raise ValidationError(f"lossless cross-check needs alpha = 1, got {p.alpha}")
    u = PartitionedUnitary(p.coupler(), Partition.from_sizes(1, 1))
    loop = elementary_loop(u, [[cmath.exp(1j * p.theta)]])
    fields = resonator_fields(p)
    l00 = complex(loop.L00[0, 0])
    internal = complex(loop.internal_out[0, 0])
    return CrosscheckReport(
        l00, fields.E_t1, internal, fields.E_t2,
        abs(l00 - fields.E_t1), abs(internal - fields.E_t2),
    )


class SpectrumRow(NamedTuple):
    theta: float
    T: float
    phase: float
    circulating: float
    flag: bool


def spectrum_sweep(t_coupling, kappa, alpha, theta_min, theta_max, n) -> list[SpectrumRow]:
    """Transmission ``|E_t1|^2``, phase ``arg E_t1`` and circulating power ``|E_t2|^2`` over ``theta``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not (math.isfinite(theta_min) and math.isfinite(theta_max)) or theta_max <= theta_min:
        raise ValueError(f"bad theta range [{theta_min}, {theta_max}]")
    p = ResonatorParams(t_coupling, kappa, alpha, theta_min)
    thetas = np.linspace(theta_min, theta_max, int(n))
    et1, _, et2, flags = _kernels.resonator_fields_array(p.t_coupling, p.kappa, p.alpha, thetas)
    return [
        SpectrumRow(float(th), float(abs(a) ** 2), float(np.angle(a)), float(abs(b) ** 2), bool(f))
        for th, a, b, f in zip(thetas, et1, et2, flags)
    ]
