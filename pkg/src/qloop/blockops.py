"""Dense complex matrices split into two ports.

A :class:`Partition` splits basis indices ``0..n-1`` into ``block0`` and
``block1``; the projectors ``P0``, ``P1`` are kept as index sets so that
``P0 + P1 = 1`` and ``P0 P1 = 0`` hold exactly.  Blocks ``U_kl = P_k U P_l``
are stored compressed, i.e. as the ``len(block_k) x len(block_l)``
submatrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "Partition",
    "PartitionedUnitary",
    "as_matrix",
    "unitarity_defect",
    "is_unitary",
    "split_blocks",
    "block",
    "assemble",
    "loop_closure",
    "swap_closure",
    "haar_random_unitary",
]


def as_matrix(data, name="matrix") -> np.ndarray:
    """Coerce ``data`` to a finite 2-d complex128 array (a copy)."""
    m = np.array(data, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m


def _require_square(m: np.ndarray, name="matrix"):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")


def unitarity_defect(m) -> float:
    """max(||M M^† - I||_F, ||M^† M - I||_F)."""
    m = np.asarray(m, dtype=complex)
    _require_square(m)
    eye = np.eye(m.shape[0])
    mh = m.conj().T
    return float(max(np.linalg.norm(m @ mh - eye), np.linalg.norm(mh @ m - eye)))


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff both ``M M^†`` and ``M^† M`` are within ``tol`` of the identity (Frobenius)."""
    return unitarity_defect(m) <= tol


@dataclass(frozen=True)
class Partition:
    """Ordered split of ``range(total_dim)`` into two non-empty ports."""

    total_dim: int
    block0: tuple
    block1: tuple

    def __post_init__(self):
        b0 = tuple(int(i) for i in self.block0)
        b1 = tuple(int(i) for i in self.block1)
        object.__setattr__(self, "block0", b0)
        object.__setattr__(self, "block1", b1)
        if not b0 or not b1:
            raise DimensionError("both partition blocks must be non-empty")
        if len(set(b0)) != len(b0) or len(set(b1)) != len(b1):
            raise DimensionError("partition blocks contain repeated indices")
        if set(b0) & set(b1):
            raise DimensionError("partition blocks overlap")
        if set(b0) | set(b1) != set(range(self.total_dim)):
            raise DimensionError(f"partition blocks do not cover 0..{self.total_dim - 1}")

    @classmethod
    def from_sizes(cls, n0: int, n1: int) -> "Partition":
        """Contiguous partition: first ``n0`` indices in port 0, next ``n1`` in port 1."""
        return cls(n0 + n1, tuple(range(n0)), tuple(range(n0, n0 + n1)))

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.block0), len(self.block1)

    def indices(self, k: int) -> tuple:
        if k == 0:
            return self.block0
        if k == 1:
            return self.block1
        raise DimensionError(f"port index must be 0 or 1, got {k!r}")

    def projector(self, k: int) -> np.ndarray:
        p = np.zeros((self.total_dim, self.total_dim))
        idx = self.indices(k)
        p[idx, idx] = 1.0
        return p

    def to_json(self) -> dict:
        return {"dim": self.total_dim, "block0": list(self.block0), "block1": list(self.block1)}

    @classmethod
    def from_json(cls, obj) -> "Partition":
        try:
            return cls(int(obj["dim"]), tuple(obj["block0"]), tuple(obj["block1"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"partition: malformed JSON ({exc})") from exc


@dataclass(frozen=True)
class PartitionedUnitary:
    """A unitary two-port: square matrix plus the partition defining its ports."""

    matrix: np.ndarray
    partition: Partition
    tol: float = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        _require_square(m)
        if m.shape[0] != self.partition.total_dim:
            raise DimensionError(
                f"matrix dimension {m.shape[0]} does not match partition dimension "
                f"{self.partition.total_dim}"
            )
        defect = unitarity_defect(m)
        if defect > self.tol:
            raise ValidationError(f"matrix is not unitary: defect {defect:.3e} > tol {self.tol:.1e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def block(self, k: int, l: int) -> np.ndarray:
        return block(self, k, l)

    def blocks(self):
        return split_blocks(self.matrix, self.partition)


def split_blocks(m, partition: Partition):
    """Return ``[[M00, M01], [M10, M11]]`` as compressed submatrices."""
    m = np.asarray(m)
    if m.shape != (partition.total_dim, partition.total_dim):
        raise DimensionError(f"matrix shape {m.shape} does not match partition dimension {partition.total_dim}")
    rows = [np.asarray(partition.indices(k)) for k in (0, 1)]
    return [[m[np.ix_(rows[k], rows[l])].copy() for l in (0, 1)] for k in (0, 1)]


def block(u: PartitionedUnitary, k: int, l: int) -> np.ndarray:
    """Compressed block ``P_k U P_l``: rows ``block_k``, columns ``block_l``."""
    p = u.partition
    return u.matrix[np.ix_(np.asarray(p.indices(k)), np.asarray(p.indices(l)))].copy()


def assemble(blocks, partition: Partition) -> np.ndarray:
    """Inverse of :func:`split_blocks`."""
    out = np.zeros((partition.total_dim, partition.total_dim), dtype=complex)
    for k in (0, 1):
        for l in (0, 1):
            b = np.asarray(blocks[k][l], dtype=complex)
            rows, cols = partition.indices(k), partition.indices(l)
            if b.ndim == 0 and len(rows) == len(cols) == 1:
                b = b.reshape(1, 1)
            if b.shape != (len(rows), len(cols)):
                raise DimensionError(
                    f"block ({k},{l}) has shape {b.shape}, expected {(len(rows), len(cols))}"
                )
            out[np.ix_(np.asarray(rows), np.asarray(cols))] = b
    return out


def loop_closure(partition: Partition, w11, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Full-space loop operator ``W = P0 + P1 W P1`` built from its looped block."""
    w11 = as_matrix(w11, "W11")
    n0, n1 = partition.sizes
    if w11.shape != (n1, n1):
        raise DimensionError(f"W11 must be {n1}x{n1}, got {w11.shape}")
    defect = unitarity_defect(w11)
    if defect > tol:
        raise ValidationError(f"W11 is not unitary: ||W11 W11^† - I||_F = {defect:.3e}")
    return assemble([[np.eye(n0), np.zeros((n0, n1))], [np.zeros((n1, n0)), w11]], partition)


def swap_closure(partition: Partition, w01, w10, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Off-diagonal closure ``W = W01 + W10`` coupling the two ports crosswise."""
    n0, n1 = partition.sizes
    if n0 != n1:
        raise DimensionError(f"swap closure needs equal port sizes, got {n0} and {n1}")
    w01 = as_matrix(w01, "W01")
    w10 = as_matrix(w10, "W10")
    for name, w in (("W01", w01), ("W10", w10)):
        if w.shape != (n0, n0):
            raise DimensionError(f"{name} must be {n0}x{n0}, got {w.shape}")
    w = assemble([[np.zeros((n0, n0)), w01], [w10, np.zeros((n0, n0))]], partition)
    defect = unitarity_defect(w)
    if defect > tol:
        raise ValidationError(f"swap closure is not unitary: defect {defect:.3e}")
    return w


def haar_random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary, deterministic in ``seed``.

    QR of a complex Ginibre matrix with the diagonal of R rotated onto the
    positive reals (Mezzadri's phase fix).
    """
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
