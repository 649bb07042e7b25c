"""
Permutations of {1..N} in index-vector form.

``map[p]`` is the source position feeding target position ``p``, so applying
P to a vector gathers: (P a)[p] = a[map[p]]. Maps are 1-based at the API
boundary and 0-based internally. Composition follows matrix multiplication:
``(P @ R).apply(a) == P.apply(R.apply(a))``.
"""
from typing import Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from app.core.config import settings
from app.core.errors import BadPermutation, ShapeMismatch, SizeOverflow
from app.models.tensor import DenseTensor


class PermutationMap:
    __slots__ = ("_map",)

    def __init__(self, one_based: Sequence[int] | np.ndarray):
        arr = np.asarray(one_based, dtype=np.int64).reshape(-1) - 1
        self._map = self._validated(arr)

    @staticmethod
    def _validated(zero_based: np.ndarray) -> np.ndarray:
        n = zero_based.size
        if n == 0:
            raise BadPermutation("a permutation needs at least one position")
        if zero_based.min() < 0 or zero_based.max() >= n:
            raise BadPermutation(f"entries must lie in 1..{n}")
        seen = np.zeros(n, dtype=bool)
        seen[zero_based] = True
        if not seen.all():
            raise BadPermutation("map is not a bijection")
        out = np.array(zero_based, dtype=np.int64)
        out.setflags(write=False)
        return out

    @classmethod
    def from_zero_based(cls, zero_based: np.ndarray) -> "PermutationMap":
        out = object.__new__(cls)
        out._map = cls._validated(np.asarray(zero_based, dtype=np.int64).reshape(-1))
        return out

    @classmethod
    def identity(cls, n: int) -> "PermutationMap":
        return cls.from_zero_based(np.arange(n))

    # ------------------------------------------------------------------
    @property
    def size(self) -> int:
        return self._map.size

    @property
    def zero_based(self) -> np.ndarray:
        return self._map

    @property
    def one_based(self) -> np.ndarray:
        return self._map + 1

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._map, np.arange(self.size)))

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec)
        if vec.shape[0] != self.size:
            raise ShapeMismatch(f"permutation of size {self.size} applied to length {vec.shape[0]}")
        return vec[self._map]

    def apply_tensor(self, t: DenseTensor) -> DenseTensor:
        """P vec(t), reshaped back to the shape of ``t``."""
        return DenseTensor(self.apply(t.data), t.shape)

    def inverse(self) -> "PermutationMap":
        inv = np.empty_like(self._map)
        inv[self._map] = np.arange(self.size)
        return PermutationMap.from_zero_based(inv)

    # the transpose of a permutation matrix is its inverse
    transpose = inverse

    @property
    def T(self) -> "PermutationMap":
        return self.inverse()

    def __matmul__(self, other: "PermutationMap") -> "PermutationMap":
        if other.size != self.size:
            raise ShapeMismatch(f"composing permutations of size {self.size} and {other.size}")
        return PermutationMap.from_zero_based(other.zero_based[self._map])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationMap):
            return NotImplemented
        return bool(np.array_equal(self._map, other.zero_based))

    __hash__ = None

    def __repr__(self) -> str:
        return f"<PermutationMap size={self.size}>"

    # ------------------------------------------------------------------
    def pattern(self) -> Tuple[np.ndarray, np.ndarray]:
        """1-based (row, col) positions of the ones of the permutation matrix."""
        rows = np.arange(1, self.size + 1)
        return rows, self._map + 1

    def to_matrix(self, limit: int | None = None) -> np.ndarray:
        limit = settings.DENSE_PERMUTATION_LIMIT if limit is None else limit
        if self.size > limit:
            raise SizeOverflow(f"dense export of a size-{self.size} permutation exceeds {limit}")
        mat = np.zeros((self.size, self.size))
        mat[np.arange(self.size), self._map] = 1.0
        return mat

    def orbit_labels(self) -> np.ndarray:
        """Cycle label of every position (0-based, numbered by first occurrence)."""
        n = self.size
        graph = coo_matrix((np.ones(n), (np.arange(n), self._map)), shape=(n, n))
        _, labels = connected_components(graph, directed=False)
        return labels
