"""Compare the compiled and pure-Python kernel backends.

Run ``python benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is timed
on both backends with identical inputs, and the outputs are checked to agree.
"""
import argparse
import math
import timeit

import numpy as np

from qloop._kernels import available_backends
from qloop.blockops import haar_random_unitary


def cases():
    u = haar_random_unitary(16, 0)
    u00, u01, u10, u11 = u[:8, :8], u[:8, 8:], u[8:, :8], u[8:, 8:]
    w = haar_random_unitary(8, 1)
    lead, m = u01 @ w, u11 @ w
    t_small = np.linspace(0.0, 2.0, 401)
    t_big = np.linspace(0.0, 2.0, 100_000)
    theta = np.linspace(0.0, 2 * math.pi, 100_000)
    x = haar_random_unitary(2, 2)
    return [
        ("series 8x8, 2000 terms", "series_partial_sum", (u00, lead, m, u10, 2000)),
        ("halfpipe, 401 samples", "rotation_loop_phase", (2 * math.pi, math.pi / 2, t_small)),
        ("halfpipe, 1e5 samples", "rotation_loop_phase", (2 * math.pi, math.pi / 2, t_big)),
        ("resonator, 1e5 samples", "resonator_fields_array", (0.9, math.sqrt(0.19), 0.95, theta)),
        ("jordan, cutoff 6", "jordan_matrix", (x, 6)),
        ("jordan, cutoff 20", "jordan_matrix", (x, 20)),
    ]


def _agree(a, b):
    if isinstance(a, tuple):
        return all(_agree(p, q) for p, q in zip(a, b))
    return np.allclose(a, b, atol=1e-12, equal_nan=True)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = available_backends()
    names = sorted(backends)
    print(f"{'case':26s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn, inputs in cases():
        times, outs = {}, {}
        for name in names:
            f = getattr(backends[name], fn)
            outs[name] = f(*inputs)
            number = max(1, int(0.05 / max(timeit.timeit(lambda: f(*inputs), number=1), 1e-7)))
            best = min(timeit.repeat(lambda: f(*inputs), number=number, repeat=args.repeat)) / number
            times[name] = best
        line = f"{label:26s}" + "".join(f"{times[n] * 1e3:10.3f}ms" for n in names)
        if "cython" in times:
            line += f"{times['python'] / times['cython']:11.1f}x"
            if not _agree(outs["python"], outs["cython"]):
                line += "  MISMATCH"
        print(line)


if __name__ == "__main__":
    main()
