"""
Tensor Kronecker products and rank-1 outer products.

In B (x) C the right factor C varies fastest: the grouped index of mode r is
[i_r j_r] with i_r running over C and j_r over B.
"""
from functools import reduce
from typing import Sequence

import numpy as np

from app.core.errors import EmptyInput, OrderMismatch
from app.models.tensor import DenseTensor


def outer_rank1(vectors: Sequence[np.ndarray]) -> DenseTensor:
    """a1 o a2 o ... o ad as a d-way tensor."""
    if len(vectors) == 0:
        raise EmptyInput("outer product of an empty vector list")
    vecs = [np.asarray(v, dtype=np.float64).reshape(-1) for v in vectors]
    if any(v.size == 0 for v in vecs):
        raise EmptyInput("outer product with an empty vector")
    return DenseTensor.from_array(reduce(np.multiply.outer, vecs))


def tensor_kron(b: DenseTensor, c: DenseTensor) -> DenseTensor:
    if b.order != c.order:
        raise OrderMismatch(
            f"Kronecker product of an order-{b.order} and an order-{c.order} tensor; pad with singleton modes"
        )
    k = b.order
    # vec(C) runs fastest inside np.kron(vec(B), vec(C))
    blocks = np.kron(b.data, c.data).reshape(c.shape + b.shape, order="F")
    axes = [a for r in range(k) for a in (r, k + r)]
    shape = tuple(m * n for m, n in zip(c.shape, b.shape))
    return DenseTensor.from_array(np.transpose(blocks, axes).reshape(shape, order="F"))


def tensor_kron_chain(factors: Sequence[DenseTensor]) -> DenseTensor:
    """factors[0] (x) factors[1] (x) ... folded from the left."""
    if len(factors) == 0:
        raise EmptyInput("Kronecker chain of no factors")
    return reduce(tensor_kron, factors)


def matrix_kron(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Classical Kronecker product mats[0] (x) mats[1] (x) ..."""
    if len(mats) == 0:
        raise EmptyInput("Kronecker product of no matrices")
    return reduce(np.kron, [np.asarray(m, dtype=np.float64) for m in mats])
