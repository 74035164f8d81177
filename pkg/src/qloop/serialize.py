"""JSON encodings used on every qloop interface.

Matrices: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` (row-major).
Partitions: ``{"dim": n, "block0": [...], "block1": [...]}``.
Complex scalars: ``[re, im]``.
"""
import numpy as np

from .blockops import Partition, as_matrix
from .errors import ValidationError


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj, name="value") -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    try:
        re, im = obj
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: expected [re, im], got {obj!r}") from exc


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj, name="matrix") -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: expected {{rows, cols, data}} ({exc})") from exc
    if len(data) != rows * cols:
        raise ValidationError(f"{name}: {len(data)} entries for a {rows}x{cols} matrix")
    flat = [complex_from_json(v, f"{name}.data[{i}]") for i, v in enumerate(data)]
    return as_matrix(np.array(flat, dtype=complex).reshape(rows, cols), name)


def partition_to_json(p: Partition) -> dict:
    return p.to_json()


def partition_from_json(obj) -> Partition:
    return Partition.from_json(obj)
