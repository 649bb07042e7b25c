"""
Dense k-way tensors stored first-index-fastest.

The flat ``data`` vector of a DenseTensor *is* vec(A): entry (i1, ..., ik)
(1-based) lives at i1 + n1(i2-1) + n1 n2(i3-1) + ..., so numpy views use
``order="F"`` throughout. Instances are immutable; every operation returns a
new tensor.
"""
from typing import Iterable, Sequence, Tuple

import numpy as np

from app.core.errors import (
    ArityMismatch,
    BadPermutation,
    IndexOutOfRange,
    ShapeMismatch,
    SizeOverflow,
)

Shape = Tuple[int, ...]

INT64_MAX = np.iinfo(np.int64).max


def checked_size(dims: Iterable[int]) -> int:
    """Element count of ``dims``; raises SizeOverflow past the int64 range."""
    size = 1
    for n in dims:
        size *= int(n)
        if size > INT64_MAX:
            raise SizeOverflow(f"element count of {tuple(dims)} exceeds 64-bit range")
    return size


def validate_shape(dims: Iterable[int]) -> Shape:
    shape = tuple(int(n) for n in dims)
    if not shape:
        raise ShapeMismatch("a shape needs at least one mode")
    if any(n < 1 for n in shape):
        raise ShapeMismatch(f"every dimension must be >= 1, got {shape}")
    checked_size(shape)
    return shape


def _read_only(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class DenseTensor:
    __slots__ = ("_data", "_shape")

    def __init__(self, data: Sequence[float] | np.ndarray, shape: Sequence[int]):
        shape = validate_shape(shape)
        vec = np.array(data, dtype=np.float64).reshape(-1)
        if vec.size != checked_size(shape):
            raise ShapeMismatch(f"{vec.size} values cannot fill a {shape} tensor")
        self._data = _read_only(vec)
        self._shape = shape

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------
    @classmethod
    def _wrap(cls, vec: np.ndarray, shape: Shape) -> "DenseTensor":
        # Skips validation and copying; ``vec`` must already be a private buffer.
        out = object.__new__(cls)
        out._data = vec if not vec.flags.writeable else _read_only(vec)
        out._shape = shape
        return out

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "DenseTensor":
        """Wrap an n-d numpy array, keeping its logical indexing."""
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        shape = validate_shape(arr.shape)
        return cls._wrap(np.array(arr.reshape(-1, order="F")), shape)

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "DenseTensor":
        shape = validate_shape(shape)
        return cls._wrap(np.zeros(checked_size(shape)), shape)

    # ------------------------------------------------------------------
    # Metadata
    # ------------------------------------------------------------------
    @property
    def shape(self) -> Shape:
        return self._shape

    @property
    def order(self) -> int:
        return len(self._shape)

    @property
    def size(self) -> int:
        return self._data.size

    @property
    def data(self) -> np.ndarray:
        """vec(A) as a read-only array."""
        return self._data

    def to_array(self) -> np.ndarray:
        """Read-only n-d view with the tensor's own index layout."""
        return self._data.reshape(self._shape, order="F")

    # ------------------------------------------------------------------
    # Indexing and rearrangement
    # ------------------------------------------------------------------
    def linear_index(self, idx: Sequence[int]) -> int:
        """1-based multi-index to 1-based linear position."""
        if len(idx) != self.order:
            raise ArityMismatch(f"index of length {len(idx)} for an order-{self.order} tensor")
        pos, stride = 0, 1
        for i, n in zip(idx, self._shape):
            if not 1 <= i <= n:
                raise IndexOutOfRange(f"index {tuple(idx)} outside shape {self._shape}")
            pos += (i - 1) * stride
            stride *= n
        return pos + 1

    def entry(self, idx: Sequence[int]) -> float:
        return float(self._data[self.linear_index(idx) - 1])

    def reshape(self, new_shape: Sequence[int]) -> "DenseTensor":
        new_shape = validate_shape(new_shape)
        if checked_size(new_shape) != self.size:
            raise ShapeMismatch(f"cannot reshape {self._shape} into {new_shape}")
        return DenseTensor._wrap(self._data, new_shape)

    def permute_modes(self, perm: Sequence[int]) -> "DenseTensor":
        """
        Reorder modes; ``perm`` is 1-based. Mode m of the result is mode
        perm[m] of the input, and the data is physically rearranged.
        """
        axes = [int(p) - 1 for p in perm]
        if sorted(axes) != list(range(self.order)):
            raise BadPermutation(f"{tuple(perm)} is not a permutation of 1..{self.order}")
        moved = np.transpose(self.to_array(), axes)
        return DenseTensor._wrap(np.array(moved.reshape(-1, order="F")), tuple(moved.shape))

    def mode_product(self, r: int, u: "np.ndarray | DenseTensor") -> "DenseTensor":
        """r-mode product with a matrix U (columns = n_r), r is 1-based."""
        mat = u.to_array() if isinstance(u, DenseTensor) else np.asarray(u, dtype=np.float64)
        if mat.ndim != 2:
            raise ShapeMismatch("mode product needs a matrix")
        if not 1 <= r <= self.order:
            raise IndexOutOfRange(f"mode {r} of an order-{self.order} tensor")
        if mat.shape[1] != self._shape[r - 1]:
            raise ShapeMismatch(
                f"matrix with {mat.shape[1]} columns cannot act on mode {r} of size {self._shape[r - 1]}"
            )
        prod = np.tensordot(mat, self.to_array(), axes=(1, r - 1))
        return DenseTensor.from_array(np.moveaxis(prod, 0, r - 1))

    # ------------------------------------------------------------------
    # Inner products and arithmetic
    # ------------------------------------------------------------------
    def inner(self, other: "DenseTensor") -> float:
        if other.shape != self._shape:
            raise ShapeMismatch(f"inner product of {self._shape} and {other.shape}")
        # np.sum reduces pairwise
        return float(np.sum(self._data * other.data))

    def frobenius_norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def _same_shape(self, other: "DenseTensor") -> None:
        if other.shape != self._shape:
            raise ShapeMismatch(f"operands of shape {self._shape} and {other.shape}")

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        self._same_shape(other)
        return DenseTensor._wrap(self._data + other.data, self._shape)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        self._same_shape(other)
        return DenseTensor._wrap(self._data - other.data, self._shape)

    def __mul__(self, alpha: float) -> "DenseTensor":
        return DenseTensor._wrap(self._data * float(alpha), self._shape)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self._shape == other.shape and bool(np.array_equal(self._data, other.data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"<DenseTensor shape={'x'.join(map(str, self._shape))}>"


def inner(a: DenseTensor, b: DenseTensor) -> float:
    return a.inner(b)


def frobenius_norm(t: DenseTensor) -> float:
    return t.frobenius_norm()
