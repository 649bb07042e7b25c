import numpy as np
import pytest

from app.core.errors import BadPermutation, ShapeMismatch, SizeOverflow
from app.models.permutation import PermutationMap
from app.models.tensor import DenseTensor


def test_validation():
    with pytest.raises(BadPermutation):
        PermutationMap([1, 1, 2])
    with pytest.raises(BadPermutation):
        PermutationMap([0, 1, 2])
    with pytest.raises(BadPermutation):
        PermutationMap([])


def test_apply_gathers_from_map():
    p = PermutationMap([3, 1, 2])
    assert p.apply(np.array([10.0, 20.0, 30.0])).tolist() == [30.0, 10.0, 20.0]
    assert np.array_equal(p.to_matrix() @ np.array([10.0, 20.0, 30.0]), [30.0, 10.0, 20.0])
    with pytest.raises(ShapeMismatch):
        p.apply(np.ones(4))


def test_composition_follows_matrix_product(rng):
    n = 7
    p = PermutationMap.from_zero_based(rng.permutation(n))
    r = PermutationMap.from_zero_based(rng.permutation(n))
    a = rng.standard_normal(n)
    assert np.array_equal((p @ r).apply(a), p.apply(r.apply(a)))
    assert np.array_equal((p @ r).to_matrix(), p.to_matrix() @ r.to_matrix())


def test_inverse_and_transpose(rng):
    p = PermutationMap.from_zero_based(rng.permutation(9))
    assert (p @ p.inverse()).is_identity()
    assert p.T == p.transpose() == p.inverse()
    assert np.array_equal(p.T.to_matrix(), p.to_matrix().T)


def test_apply_tensor_keeps_shape(rng):
    t = DenseTensor.from_array(rng.standard_normal((2, 3)))
    p = PermutationMap.identity(6)
    assert p.apply_tensor(t) == t


def test_pattern_is_one_based():
    rows, cols = PermutationMap([2, 1, 3]).pattern()
    assert rows.tolist() == [1, 2, 3]
    assert cols.tolist() == [2, 1, 3]


def test_dense_export_limit():
    with pytest.raises(SizeOverflow):
        PermutationMap.identity(10).to_matrix(limit=9)


def test_orbit_labels_are_cycles():
    labels = PermutationMap([2, 3, 1, 4, 6, 5]).orbit_labels()
    assert labels[0] == labels[1] == labels[2]
    assert labels[4] == labels[5]
    assert len(set(labels.tolist())) == 3
