"""Randomised property suites run by ``qloop check``.

Each suite returns a :class:`SuiteResult` with the worst defect observed and
the tolerance it was judged against.  A ``tol`` override replaces every
suite's numerical tolerance (structural thresholds such as the
convergence-order band are not affected).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blockops import Partition, PartitionedUnitary, haar_random_unitary, swap_closure, unitarity_defect
from .errors import SingularityError
from .fock import (
    FockSpace,
    exponential_form,
    jordan_map,
    ladder,
    machine_phases,
    number_operator,
    second_quantized_gate,
    tensor_oscillator_rep,
)
from .gallery import (
    MachineParams,
    RotationLoopParams,
    effective_hamiltonian,
    halfpipe_sweep,
    hermitian_defect,
    looped_rotation_L,
    machine_eigensystem,
    mz_time_probabilities,
    opened_mz_distribution,
    stone_failure_witness,
    symmetric_T,
    two_qubit_T,
    two_qubit_T_generic,
)
from .loopcore import elementary_loop, elementary_loop_series, series_terms_for, spectral_radius, time_machine
from .resonator import ResonatorParams, crosscheck_lossless, spectrum_sweep

LOOP_PARTITIONS = ((1, 1), (2, 2), (3, 5), (8, 8))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_defect: float
    tolerance: float
    trials: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name:<28} max_defect={self.max_defect:.3e}  tol={self.tolerance:.1e}  trials={self.trials}{extra}"


def _result(name, defects, tol, detail="", extra_ok=True):
    worst = float(max(defects)) if len(defects) else 0.0
    return SuiteResult(name, bool(extra_ok and worst <= tol), worst, tol, len(defects), detail)


def _seeds(rng, n):
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=n)]


def _loop_trials(seed, n_trials=200):
    rng = np.random.default_rng(seed)
    per = n_trials // len(LOOP_PARTITIONS)
    for n0, n1 in LOOP_PARTITIONS:
        p = Partition.from_sizes(n0, n1)
        for s_u, s_w in zip(_seeds(rng, per), _seeds(rng, per)):
            yield PartitionedUnitary(haar_random_unitary(n0 + n1, s_u), p), haar_random_unitary(n1, s_w)


def loop_unitarity(seed, tol=1e-10):
    defects = []
    for u, w in _loop_trials(seed):
        l00 = elementary_loop(u, w).L00
        eye = np.eye(l00.shape[0])
        defects.append(max(np.linalg.norm(l00 @ l00.conj().T - eye), np.linalg.norm(l00.conj().T @ l00 - eye)))
    return _result("loop_unitarity", defects, tol)


def loop_form_equivalence(seed, tol=1e-12):
    defects = [elementary_loop(u, w).form_discrepancy for u, w in _loop_trials(seed)]
    return _result("loop_form_equivalence", defects, tol)


def series_oracle(seed, tol=1e-8):
    defects = []
    for u, w in _loop_trials(seed):
        rho = spectral_radius(u.block(1, 1) @ w)
        if rho > 0.99:
            continue
        n = series_terms_for(rho)
        defects.append(np.linalg.norm(elementary_loop_series(u, w, n) - elementary_loop(u, w).L00))
    return _result("series_oracle", defects, tol)


def scalar_identity(seed, tol=1e-12):
    rng = np.random.default_rng(seed)
    p = Partition.from_sizes(1, 1)
    defects = []
    for s in _seeds(rng, 100):
        u = haar_random_unitary(2, s)
        w = np.exp(1j * rng.uniform(0, 2 * np.pi))
        closed = -w * np.linalg.det(u) * (1 - np.conj(u[1, 1]) * np.conj(w)) / (1 - u[1, 1] * w)
        defects.append(abs(elementary_loop(PartitionedUnitary(u, p), [[w]]).L00[0, 0] - closed))
    for a, b in rng.uniform(0, 2 * np.pi, size=(10, 2)):
        u = np.diag([np.exp(1j * a), np.exp(1j * b)])
        r = elementary_loop(PartitionedUnitary(u, p), [[np.exp(-1j * b)]])
        defects.append(abs(r.L00[0, 0] - u[0, 0]) + abs(abs(r.L00[0, 0]) - 1) + (0.0 if r.degenerate else 1.0))
    return _result("scalar_2x2_identity", defects, tol)


def machine_unitarity(seed, tol=1e-10):
    rng = np.random.default_rng(seed)
    defects = []
    for _ in range(100):
        n = int(rng.integers(1, 7))
        p = Partition.from_sizes(n, n)
        su, sv, s0, s1 = _seeds(rng, 4)
        u = PartitionedUnitary(haar_random_unitary(2 * n, su), p)
        v = PartitionedUnitary(haar_random_unitary(2 * n, sv), p)
        w = swap_closure(p, haar_random_unitary(n, s0), haar_random_unitary(n, s1))
        m = time_machine(u, v, w)
        defects.append(max(m.unitarity_defect_T, m.unitarity_defect_S, m.s_consistency))
    return _result("machine_unitarity", defects, tol)


ANGLE_GRID = np.array([0.1, 0.7, 1.3, 1.9, 2.5])
PHASE_GRID = np.array([0.2, 1.3, 2.4, 3.5, 4.6])


def machine_generic_vs_analytic(seed=None, tol=1e-12):
    defects = []
    for wt in ANGLE_GRID:
        for wt_ in ANGLE_GRID:
            for ph in PHASE_GRID:
                for ph_ in PHASE_GRID:
                    p = MachineParams(1.0, wt, 1.0, wt_, ph, ph_)
                    defects.append(np.max(np.abs(two_qubit_T_generic(p).T - two_qubit_T(p))))
    return _result("machine_generic_vs_analytic", defects, tol)


def _symmetric_grid():
    for wt in np.linspace(0.05, 2 * np.pi - 0.05, 10):
        for ph in np.linspace(0.1, 2 * np.pi - 0.1, 10):
            yield 1.0, float(wt), float(ph)


def eigensystem(seed=None, tol=1e-12):
    defects = []
    for omega, t, phi in _symmetric_grid():
        es = machine_eigensystem(omega, t, phi)
        tm = two_qubit_T(MachineParams.symmetric(omega, t, phi))
        loop = looped_rotation_L(RotationLoopParams(omega, phi, t))
        flipped = -looped_rotation_L(RotationLoopParams(omega, phi, t + math.pi / omega))
        defects.append(max(
            np.linalg.norm(tm @ es.v_plus - es.tau_plus * es.v_plus),
            np.linalg.norm(tm @ es.v_minus - es.tau_minus * es.v_minus),
            abs(abs(es.tau_plus) - 1), abs(abs(es.tau_minus) - 1),
            abs(es.tau_minus - loop), abs(es.tau_plus - flipped),
        ))
    return _result("eigensystem", defects, tol)


def exponential_form_suite(seed=None, tol=1e-10):
    defects = []
    for omega, t, phi in _symmetric_grid():
        if abs(math.cos(omega * t)) <= 1e-3 or abs(math.sin(phi)) <= 1e-3:
            continue
        ph = machine_phases(omega, t, phi)
        defects.append(np.max(np.abs(exponential_form(ph) - symmetric_T(omega, t, phi))))
    return _result("exponential_form", defects, tol)


def fock_suite(seed, tol=1e-10, cutoff=6):
    rng = np.random.default_rng(seed)
    space = FockSpace(cutoff)
    a = [ladder(space, k, "annihilate").matrix for k in (0, 1)]
    ad = [ladder(space, k, "create").matrix for k in (0, 1)]
    defects, exact = [], []
    for k in (0, 1):
        for l in (0, 1):
            comm = a[k] @ ad[l] - ad[l] @ a[k]
            if k == l:
                safe = np.array([i for i, occ in enumerate(space.basis) if occ[k] < cutoff])
                defects.append(np.max(np.abs(comm[np.ix_(safe, safe)] - np.eye(len(safe)))))
            else:
                defects.append(np.max(np.abs(comm)))
    n_op = number_operator(space).matrix
    safe = space.safe_indices()
    for s in _seeds(rng, 5):
        tp = haar_random_unitary(2, s)
        gate = second_quantized_gate(tp, space).matrix
        vac = space.vacuum()
        exact.append(np.max(np.abs(gate @ vac - vac)) + np.max(np.abs(gate.conj().T @ vac - vac)))
        exact.append(np.max(np.abs(gate @ n_op - n_op @ gate)))
        for n in range(cutoff + 1):
            defects.append(unitarity_defect(gate[np.ix_(space.sector(n), space.sector(n))]))
        for k in (0, 1):
            lhs = gate @ ad[k] @ gate.conj().T
            rhs = ad[0] * tp[0, k] + ad[1] * tp[1, k]
            defects.append(np.linalg.norm((lhs - rhs)[:, safe]))
    for _ in range(50):
        x, y = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(2))
        xh, yh = jordan_map(x, space).matrix, jordan_map(y, space).matrix
        lhs = xh @ yh - yh @ xh
        rhs = jordan_map(x @ y - y @ x, space).matrix
        defects.append(np.linalg.norm((lhs - rhs)[np.ix_(safe, safe)]))
    # vacuum invariance and number conservation hold bit-exactly
    return _result("fock", defects + exact, tol, extra_ok=not any(exact))


def bell_basis(seed=None, tol=1e-12):
    rep = tensor_oscillator_rep(3)
    k = rep.interaction().matrix
    vac = rep.vacuum()
    r = 1 / math.sqrt(2)
    defects = []
    for sign in (1, -1):
        bell = r * (rep.ket(1, 0) + sign * rep.ket(0, 1))
        defects.append(np.linalg.norm(r * (rep.a0_dag.matrix + sign * rep.a1_dag.matrix) @ vac - bell))
        defects.append(np.linalg.norm(k @ bell - sign * bell))
        other = r * (rep.ket(1, 1) + sign * rep.ket(0, 0))
        built = r * (rep.a0_dag.matrix @ rep.a1_dag.matrix @ vac + sign * vac)
        defects.append(np.linalg.norm(built - other))
        image = k @ other
        defects.append(abs(np.vdot(other, image)))
        defects.append(abs(np.linalg.norm(image) - math.sqrt(2)))
    return _result("bell_basis", defects, tol)


def resonator_suite(seed, tol=1e-12):
    rng = np.random.default_rng(seed)
    defects = []
    for _ in range(100):
        angle, tp, kp, theta = rng.uniform(0.05, np.pi / 2), *rng.uniform(0, 2 * np.pi, 3)
        defects.append(crosscheck_lossless(ResonatorParams.from_angle(angle, tp, kp, 1.0, theta)).max_deviation)
    p = ResonatorParams.from_angle(rng.uniform(0.05, np.pi / 2), rng.uniform(0, 2 * np.pi), 0.0)
    for row in spectrum_sweep(p.t_coupling, p.kappa, 1.0, 0.0, 2 * np.pi, 501):
        defects.append(abs(row.T - 1.0) if not row.flag else np.inf)
    return _result("resonator", defects, tol)


def figure_data(seed=None, tol=1e-12):
    rows = halfpipe_sweep()
    defects = [abs(r.re**2 + r.im**2 - 1) for r in rows]
    by_t = {round(r.t, 12): r for r in rows}
    defects.append(abs(complex(by_t[0.0].re, by_t[0.0].im) - 1))
    defects.append(abs(complex(by_t[0.25].re, by_t[0.25].im) + 1j))
    for r in rows:
        defects.append(abs(sum(mz_time_probabilities(complex(r.re, r.im))) - 1))
    return _result("figure_data", defects, tol, extra_ok=len(rows) == 401)


def opened_mz(seed=None, tol=1e-12):
    d = opened_mz_distribution()
    defects = [abs(x - y) for x, y in zip(d.opened, (0.25, 0.25, 0.5))]
    defects += [abs(x - y) for x, y in zip(d.closed, (1.0, 0.0, 0.0))]
    return _result("opened_mz", defects, tol)


def stone_failure(seed=None, tol=None):
    witness = stone_failure_witness()
    omega, t, phi = 2 * math.pi, 0.1, math.pi / 2
    hd = [hermitian_defect(effective_hamiltonian(omega, t, phi, dt)) for dt in (1e-3, 5e-4, 2.5e-4)]
    ratios = [hd[0] / hd[1], hd[1] / hd[2]]
    worst = max(abs(r / 4 - 1) for r in ratios)
    ok = witness is not None and worst <= 0.2
    detail = f"witness={witness[:2] if witness else None} ratios={ratios[0]:.3f},{ratios[1]:.3f}"
    return SuiteResult("stone_failure", ok, worst, 0.2, 3, detail)


SUITES = (
    loop_unitarity,
    loop_form_equivalence,
    series_oracle,
    scalar_identity,
    machine_unitarity,
    machine_generic_vs_analytic,
    eigensystem,
    exponential_form_suite,
    fock_suite,
    bell_basis,
    resonator_suite,
    figure_data,
    opened_mz,
    stone_failure,
)


def run_all(seed: int = 0, tol: float | None = None) -> list[SuiteResult]:
    results = []
    for suite in SUITES:
        kwargs = {} if tol is None or suite is stone_failure else {"tol": tol}
        try:
            results.append(suite(seed, **kwargs))
        except SingularityError as exc:
            results.append(SuiteResult(suite.__name__, False, math.inf, tol or math.nan, 0, f"singular: {exc}"))
    return results
