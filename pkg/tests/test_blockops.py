import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloop.blockops import (
    Partition,
    PartitionedUnitary,
    assemble,
    block,
    haar_random_unitary,
    is_unitary,
    loop_closure,
    split_blocks,
    swap_closure,
    unitarity_defect,
)
from qloop.errors import DimensionError, ValidationError

from .conftest import rotation


@st.composite
def partitions(draw, max_dim=12):
    n = draw(st.integers(2, max_dim))
    perm = draw(st.permutations(range(n)))
    k = draw(st.integers(1, n - 1))
    return Partition(n, tuple(perm[:k]), tuple(perm[k:]))


def test_is_unitary_examples():
    assert is_unitary(np.eye(3), 1e-12)
    assert is_unitary([[0, 1], [1, 0]], 1e-12)
    assert not is_unitary([[1, 1], [0, 1]], 1e-6)


def test_is_unitary_rejects_non_square():
    with pytest.raises(DimensionError):
        is_unitary(np.ones((2, 3)))


@pytest.mark.parametrize(
    "args",
    [
        (3, (0,), (1,)),  # not covering
        (2, (0, 1), ()),  # empty block
        (2, (0,), (0, 1)),  # overlap
        (2, (0, 0), (1,)),  # repeated
    ],
)
def test_partition_validation(args):
    with pytest.raises(DimensionError):
        Partition(*args)


@given(partitions())
def test_projectors_resolve_identity_exactly(p):
    p0, p1 = p.projector(0), p.projector(1)
    assert np.array_equal(p0 + p1, np.eye(p.total_dim))
    assert not np.any(p0 @ p1)


def test_block_of_rotation():
    a = 0.37
    u = PartitionedUnitary(rotation(a), Partition.from_sizes(1, 1))
    assert block(u, 0, 1) == pytest.approx(np.array([[np.sin(a)]]))
    assert block(u, 1, 0) == pytest.approx(np.array([[-np.sin(a)]]))


def test_identity_offdiagonal_blocks_vanish():
    u = PartitionedUnitary(np.eye(4), Partition(4, (2, 0), (3, 1)))
    assert not np.any(block(u, 0, 1))
    assert not np.any(block(u, 1, 0))


def test_block_selects_rows_and_columns_by_index():
    m = haar_random_unitary(6, 3)
    p = Partition(6, (4, 1), (0, 2, 3, 5))
    u = PartitionedUnitary(m, p)
    b = block(u, 0, 1)
    # index bookkeeping oracle
    for i, r in enumerate(p.block0):
        for j, c in enumerate(p.block1):
            assert b[i, j] == m[r, c]
    assert np.array_equal(assemble(split_blocks(m, p), p), m)


@settings(max_examples=60)
@given(partitions(), st.integers(0, 2**32 - 1))
def test_split_assemble_roundtrip(p, seed):
    m = haar_random_unitary(p.total_dim, seed)
    assert np.array_equal(assemble(split_blocks(m, p), p), m)
    blocks = split_blocks(m, p)
    again = split_blocks(assemble(blocks, p), p)
    for k in (0, 1):
        for l in (0, 1):
            assert np.array_equal(again[k][l], blocks[k][l])


def test_assemble_examples():
    p = Partition.from_sizes(1, 1)
    phi = 0.8
    got = assemble([[[[1]], [[0]]], [[[0]], [[np.exp(1j * phi)]]]], p)
    assert np.array_equal(got, np.diag([1, np.exp(1j * phi)]))
    p2 = Partition.from_sizes(2, 3)
    assert np.array_equal(assemble(split_blocks(np.eye(5), p2), p2), np.eye(5))
    with pytest.raises(DimensionError):
        assemble([[np.eye(2), np.zeros((2, 2))], [np.zeros((3, 2)), np.eye(3)]], p2)


def test_loop_closure():
    p = Partition.from_sizes(1, 1)
    phi = 1.1
    assert np.allclose(loop_closure(p, [[np.exp(1j * phi)]]), np.diag([1, np.exp(1j * phi)]), atol=0)
    assert np.array_equal(loop_closure(Partition.from_sizes(2, 2), np.eye(2)), np.eye(4))
    w = loop_closure(Partition.from_sizes(2, 3), haar_random_unitary(3, 5))
    assert is_unitary(w, 1e-12)
    with pytest.raises(ValidationError, match="W11"):
        loop_closure(p, [[2.0]])


def test_swap_closure():
    p = Partition.from_sizes(1, 1)
    a, b = 0.3, -1.2
    w = swap_closure(p, [[np.exp(1j * a)]], [[np.exp(1j * b)]])
    assert np.array_equal(w, np.array([[0, np.exp(1j * a)], [np.exp(1j * b), 0]]))
    p2 = Partition.from_sizes(2, 2)
    w = swap_closure(p2, np.eye(2), np.eye(2))
    assert np.array_equal(w, np.kron([[0, 1], [1, 0]], np.eye(2)))
    assert is_unitary(swap_closure(p2, haar_random_unitary(2, 1), haar_random_unitary(2, 2)), 1e-12)
    with pytest.raises(DimensionError):
        swap_closure(Partition.from_sizes(1, 2), [[1]], [[1]])
    with pytest.raises(ValidationError):
        swap_closure(p, [[2.0]], [[1.0]])


def test_haar_examples():
    u = haar_random_unitary(1, 99)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-15
    assert is_unitary(haar_random_unitary(8, 7), 1e-12)
    assert np.array_equal(haar_random_unitary(5, 42), haar_random_unitary(5, 42))
    assert not np.array_equal(haar_random_unitary(5, 42), haar_random_unitary(5, 43))
    with pytest.raises(DimensionError):
        haar_random_unitary(0, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 21, 34, 64])
def test_haar_unitary_up_to_64(n):
    assert unitarity_defect(haar_random_unitary(n, n)) <= 1e-12


def test_haar_phase_statistics():
    # Haar measure is invariant under U -> e^{ia} U, so E[tr U] = 0 and E|tr U|^2 = 1
    traces = np.array([np.trace(haar_random_unitary(4, s)) for s in range(4000)])
    assert abs(traces.mean()) < 0.05
    assert abs(np.mean(np.abs(traces) ** 2) - 1.0) < 0.1


def test_partitioned_unitary_validation():
    p = Partition.from_sizes(1, 1)
    with pytest.raises(ValidationError):
        PartitionedUnitary([[1, 1], [0, 1]], p)
    with pytest.raises(DimensionError):
        PartitionedUnitary(np.eye(3), p)
    with pytest.raises(ValidationError):
        PartitionedUnitary([[np.nan, 0], [0, 1]], p)
    u = PartitionedUnitary(np.eye(2) * (1 + 1e-7), p, tol=1e-6)
    assert u.matrix.flags.writeable is False
