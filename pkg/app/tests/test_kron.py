import itertools

import numpy as np
import pytest

from app.core.errors import EmptyInput, OrderMismatch
from app.models.tensor import DenseTensor
from app.services.kron import matrix_kron, outer_rank1, tensor_kron, tensor_kron_chain
from app.services.structure import perfect_shuffle
from app.tests.conftest import random_tensor


def _norm_rel(a: DenseTensor, b: DenseTensor) -> float:
    return (a - b).frobenius_norm() / max(b.frobenius_norm(), 1e-300)


def test_outer_rank1():
    t = outer_rank1([np.array([1.0, 2.0]), np.array([3.0, 4.0, 5.0])])
    assert t.shape == (2, 3)
    assert np.array_equal(t.to_array(), [[3, 4, 5], [6, 8, 10]])
    with pytest.raises(EmptyInput):
        outer_rank1([])


def test_matrix_kron_matches_classical():
    b = DenseTensor.from_array(np.array([[1.0, 2.0], [3.0, 4.0]]))
    c = DenseTensor.from_array(np.eye(2))
    expected = np.kron(b.to_array(), c.to_array())
    assert np.array_equal(tensor_kron(b, c).to_array(), expected)
    assert np.array_equal(matrix_kron([b.to_array(), c.to_array()]), expected)


def test_vectors_kron():
    b = DenseTensor([1, 2], (2,))
    c = DenseTensor([3, 4], (2,))
    assert np.array_equal(tensor_kron(b, c).data, [3, 4, 6, 8])


def test_entry_oracle_on_random_pairs(rng):
    for _ in range(200):
        k = int(rng.integers(1, 4))
        b = random_tensor(rng, rng.integers(1, 5, size=k))
        c = random_tensor(rng, rng.integers(1, 5, size=k))
        out = tensor_kron(b, c)
        assert out.shape == tuple(m * n for m, n in zip(c.shape, b.shape))
        arr, ba, ca = out.to_array(), b.to_array(), c.to_array()
        for i in itertools.product(*(range(n) for n in c.shape)):
            for j in itertools.product(*(range(n) for n in b.shape)):
                grouped = tuple(ir + m * jr for ir, jr, m in zip(i, j, c.shape))
                assert arr[grouped] == ba[j] * ca[i]


def test_kron_chain_entry_rule(rng):
    shapes = [(2, 3), (3, 1), (2, 2)]
    factors = [random_tensor(rng, s) for s in shapes]
    out = tensor_kron_chain(factors)
    assert out.shape == (12, 6)
    arr = out.to_array()
    # factors[-1] varies fastest
    a1, a2, a3 = (f.to_array() for f in factors)
    for idx in itertools.product(range(12), range(6)):
        i3, rest = (idx[0] % 2, idx[1] % 2), (idx[0] // 2, idx[1] // 2)
        i2, i1 = (rest[0] % 3, rest[1] % 1), (rest[0] // 3, rest[1] // 1)
        assert arr[idx] == pytest.approx(a1[i1] * a2[i2] * a3[i3], rel=1e-14)


def test_order_mismatch_and_empty(rng):
    with pytest.raises(OrderMismatch):
        tensor_kron(random_tensor(rng, (2, 2)), random_tensor(rng, (2,)))
    with pytest.raises(EmptyInput):
        tensor_kron_chain([])


def test_bilinearity(rng):
    for _ in range(100):
        a, b, c = (random_tensor(rng, (2, 3, 2)) for _ in range(3))
        d = random_tensor(rng, (3, 2, 2))
        alpha = float(rng.standard_normal())
        assert _norm_rel(tensor_kron(a + b, d), tensor_kron(a, d) + tensor_kron(b, d)) <= 1e-12
        assert _norm_rel(tensor_kron(d, b + c), tensor_kron(d, b) + tensor_kron(d, c)) <= 1e-12
        assert _norm_rel(tensor_kron(a * alpha, d), tensor_kron(a, d) * alpha) <= 1e-12


def test_associativity(rng):
    for _ in range(100):
        a, b, c = (random_tensor(rng, rng.integers(1, 4, size=3)) for _ in range(3))
        left = tensor_kron(tensor_kron(a, b), c)
        right = tensor_kron(a, tensor_kron(b, c))
        assert left.shape == right.shape
        assert _norm_rel(left, right) <= 1e-13


def test_factor_swap_is_perfect_shuffle_on_every_mode(rng):
    for _ in range(100):
        n, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        a, b = random_tensor(rng, (n,) * k), random_tensor(rng, (n,) * k)
        swap = perfect_shuffle(n, 2).to_matrix()
        moved = tensor_kron(b, a)
        for r in range(1, k + 1):
            moved = moved.mode_product(r, swap)
        assert _norm_rel(moved, tensor_kron(a, b)) <= 1e-14, (n, k)


def test_mixed_product(rng):
    for _ in range(100):
        c, d = random_tensor(rng, (2, 3, 2)), random_tensor(rng, (3, 2, 2))
        r = int(rng.integers(1, 4))
        a = rng.standard_normal((4, c.shape[r - 1]))
        b = rng.standard_normal((2, d.shape[r - 1]))
        lhs = tensor_kron(c, d).mode_product(r, np.kron(a, b))
        rhs = tensor_kron(c.mode_product(r, a), d.mode_product(r, b))
        assert _norm_rel(lhs, rhs) <= 1e-12


def test_vec_identity(rng):
    for _ in range(100):
        shape = tuple(int(n) for n in rng.integers(1, 4, size=3))
        a = random_tensor(rng, shape)
        mats = [rng.standard_normal((int(rng.integers(1, 4)), n)) for n in shape]
        out = a
        for r, p in enumerate(mats, start=1):
            out = out.mode_product(r, p)
        via_kron = matrix_kron(mats[::-1]) @ a.data
        np.testing.assert_allclose(out.data, via_kron, rtol=1e-12, atol=1e-12 * np.abs(via_kron).max())
