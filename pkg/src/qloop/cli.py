"""Command-line front end.

Examples::

    qloop loop --input sample_inputs/rotation_loop.json
    qloop machine --input '{"params": {"omega": 6.283, "t": 0.1, ...}}'
    qloop sweep --output halfpipe.csv
    qloop check --seed 3

Exit codes: 0 success, 1 validation or parse error, 2 numerical singularity.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import checks
from .blockops import DEFAULT_TOL, PartitionedUnitary, swap_closure, unitarity_defect
from .errors import DimensionError, NumericalError, SingularityError, ValidationError
from .fock import (
    DEFAULT_CUTOFF,
    FockSpace,
    apply,
    machine_phases,
    number_operator,
    second_quantized_gate,
    state_from_json,
    state_to_json,
)
from .gallery import SIGMA1, MachineParams, halfpipe_sweep, two_qubit_T, two_qubit_T_generic
from .loopcore import elementary_loop, time_machine
from .resonator import ResonatorParams, crosscheck_lossless, resonator_fields, spectrum_sweep
from .serialize import complex_from_json, complex_to_json, matrix_from_json, matrix_to_json, partition_from_json

EXIT_OK, EXIT_INVALID, EXIT_SINGULAR = 0, 1, 2


class InputError(ValidationError):
    pass


def load_input(source: str | None) -> dict:
    """Parse ``--input``: inline JSON if it starts with ``{``, otherwise a file path."""
    if source is None:
        return {}
    text = source.strip()
    if not text.startswith("{"):
        path = Path(source)
        if not path.is_file():
            raise InputError(f"input file not found: {source}")
        text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON input: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("input JSON must be an object")
    return obj


def _field(obj: dict, name: str):
    if name not in obj:
        raise InputError(f"missing field {name!r}")
    return obj[name]


def _number(obj: dict, name: str, default=None) -> float:
    if name not in obj:
        if default is None:
            raise InputError(f"missing field {name!r}")
        return float(default)
    try:
        v = float(obj[name])
    except (TypeError, ValueError) as exc:
        raise InputError(f"field {name!r} must be a number") from exc
    if not math.isfinite(v):
        raise InputError(f"field {name!r} must be finite")
    return v


def write_atomic(path: str | None, text: str) -> None:
    """Write to ``path`` via a temp file and rename; ``None`` means stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        return "0"
    r = repr(x)
    return r[:-2] if r.endswith(".0") else r


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _partitioned(obj, key, partition, tol):
    return PartitionedUnitary(matrix_from_json(_field(obj, key), key), partition, tol=tol)


def run_loop(args) -> int:
    obj = load_input(args.input)
    partition = partition_from_json(_field(obj, "partition"))
    u = _partitioned(obj, "U", partition, args.tol)
    w11 = matrix_from_json(_field(obj, "W11"), "W11")
    result = elementary_loop(u, w11, tol=args.tol)
    write_atomic(args.output, _dump(result.to_json()))
    return EXIT_OK


def run_machine(args) -> int:
    obj = load_input(args.input)
    if "params" in obj:
        prm = obj["params"]
        p = MachineParams(*(_number(prm, k) for k in ("omega", "t", "omega_prime", "t_prime", "phi", "phi_prime")))
        result = two_qubit_T_generic(p)
        analytic = two_qubit_T(p)
        out = result.to_json()
        out["T_closed_form"] = matrix_to_json(analytic)
        out["closed_form_deviation"] = float(np.max(np.abs(result.T - analytic)))
    else:
        partition = partition_from_json(_field(obj, "partition"))
        u = _partitioned(obj, "U", partition, args.tol)
        v = _partitioned(obj, "Uprime", partition, args.tol)
        if "W" in obj:
            w = matrix_from_json(obj["W"], "W")
        else:
            w = swap_closure(
                partition,
                matrix_from_json(_field(obj, "W01"), "W01"),
                matrix_from_json(_field(obj, "W10"), "W10"),
                tol=args.tol,
            )
        out = time_machine(u, v, w, tol=args.tol).to_json()
    write_atomic(args.output, _dump(out))
    return EXIT_OK


def run_sweep(args) -> int:
    obj = load_input(args.input)
    kind = obj.get("kind", args.kind)
    try:
        if kind == "halfpipe":
            rows = halfpipe_sweep(
                _number(obj, "omega", 2 * math.pi),
                _number(obj, "phi", math.pi / 2),
                _number(obj, "t_min", 0.0),
                _number(obj, "t_max", 2.0),
                int(_number(obj, "n_samples", 401)),
            )
            text = _csv(["t", "re", "im", "flag"], rows)
        elif kind == "resonator":
            rows = spectrum_sweep(
                complex_from_json(obj.get("t", 0.9), "t"),
                complex_from_json(obj.get("kappa", math.sqrt(1 - 0.81)), "kappa"),
                _number(obj, "alpha", 1.0),
                _number(obj, "theta_min", 0.0),
                _number(obj, "theta_max", 2 * math.pi),
                int(_number(obj, "n", 401)),
            )
            # flagged (singular) samples carry nan in every value column
            text = _csv(["theta", "T", "phase", "circulating"], (r[:4] for r in rows))
        else:
            raise InputError(f"unknown sweep kind {kind!r} (expected 'halfpipe' or 'resonator')")
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise InputError(str(exc)) from exc
    write_atomic(args.output, text)
    return EXIT_OK


def run_fock(args) -> int:
    obj = load_input(args.input)
    space = FockSpace(args.cutoff)
    out: dict = {"cutoff": space.cutoff, "dim": space.dim}
    if "Tprime" in obj:
        tprime = matrix_from_json(obj["Tprime"], "Tprime")
    else:
        omega, t, phi = _number(obj, "omega", 2 * math.pi), _number(obj, "t", 0.1), _number(obj, "phi", math.pi / 2)
        ph = machine_phases(omega, t, phi)
        out["phases"] = {"Phi0": ph.Phi0, "Phi1": ph.Phi1, "root_sign": ph.root_sign, "branch_warning": ph.branch_warning}
        tprime = np.cos(ph.Phi1) * np.eye(2) + 1j * np.sin(ph.Phi1) * SIGMA1
    gate = second_quantized_gate(tprime, space, tol=args.tol)
    n_op = number_operator(space).matrix
    vac = space.vacuum()
    out["Tprime"] = matrix_to_json(tprime)
    out["number_commutator_max"] = float(np.max(np.abs(gate.matrix @ n_op - n_op @ gate.matrix)))
    out["vacuum_defect"] = float(np.max(np.abs(gate.matrix @ vac - vac)))
    out["block_unitarity_defect_max"] = max(
        unitarity_defect(gate.restrict(space.sector(n))) for n in range(space.cutoff + 1)
    )
    if "state" in obj:
        psi = state_from_json(space, obj["state"])
        out["state_out"] = state_to_json(space, apply(gate, psi), atol=1e-15)
    write_atomic(args.output, _dump(out))
    return EXIT_OK


def run_resonator(args) -> int:
    obj = load_input(args.input)
    p = ResonatorParams(
        complex_from_json(_field(obj, "t"), "t"),
        complex_from_json(_field(obj, "kappa"), "kappa"),
        _number(obj, "alpha", 1.0),
        _number(obj, "theta", 0.0),
    )
    f = resonator_fields(p)
    out = {"E_t1": complex_to_json(f.E_t1), "E_i2": complex_to_json(f.E_i2), "E_t2": complex_to_json(f.E_t2)}
    if p.alpha == 1.0:
        out["crosscheck"] = crosscheck_lossless(p).to_json()
    write_atomic(args.output, _dump(out))
    return EXIT_OK


def run_check(args) -> int:
    tol = None if args.tol_given is None else args.tol_given
    results = checks.run_all(args.seed, tol)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'ALL PASS' if ok else 'FAILURES'}: {sum(r.passed for r in results)}/{len(results)} suites, seed={args.seed}")
    if args.output:
        report = [
            {"name": r.name, "passed": r.passed, "max_defect": r.max_defect, "tolerance": r.tolerance,
             "trials": r.trials, "detail": r.detail}
            for r in results
        ]
        write_atomic(args.output, _dump({"seed": args.seed, "passed": ok, "suites": report}))
    return EXIT_OK if ok else EXIT_INVALID


COMMANDS = {
    "loop": (run_loop, "elementary loop L00 from U, partition and W11"),
    "machine": (run_machine, "two-loop time machine T (and S = T W)"),
    "sweep": (run_sweep, "CSV sweep: halfpipe phase or resonator spectrum"),
    "fock": (run_fock, "second-quantized machine gate on a truncated Fock space"),
    "resonator": (run_resonator, "ring-resonator fields and lossless loop cross-check"),
    "check": (run_check, "run the randomised property suites"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qloop", description="Looped unitary evolutions.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--input", help="JSON file path or inline JSON object")
        sp.add_argument("--output", help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=None, help=f"tolerance override (default {DEFAULT_TOL:g})")
        sp.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="Fock cutoff per mode")
        if name == "sweep":
            sp.add_argument("--kind", choices=("halfpipe", "resonator"), default="halfpipe")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.tol_given = args.tol
    if args.tol is None:
        args.tol = DEFAULT_TOL
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except (SingularityError, NumericalError) as exc:
        print(f"qloop {args.command}: numerical singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ValidationError, DimensionError, ValueError) as exc:
        print(f"qloop {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
