"""Result containers produced by the SVD kernel, the PD backends and TKPSVD."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Tuple

import numpy as np

from app.models.enums import Backend
from app.models.tensor import DenseTensor, Shape

if TYPE_CHECKING:
    from app.schemas.grid_schema import FactorGrid


@dataclass(frozen=True)
class SvdResult:
    """Economy SVD A = U diag(s) V^T with p = min(m, n) columns."""
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class Rank1Term:
    sigma: float
    vectors: Tuple[np.ndarray, ...]
    # child index taken at every level of the TTr1 tree, or the core
    # multi-index for HOSVD; orders ties deterministically
    path: Tuple[int, ...] = ()
    # singular vectors on the path were only defined up to a rotation
    degenerate: bool = False

    @property
    def degree(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class PolyadicDecomposition:
    shape: Shape
    terms: Tuple[Rank1Term, ...]
    backend: Backend

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([t.sigma for t in self.terms], dtype=np.float64)


@dataclass(frozen=True)
class HosvdCore:
    """
    Economy Tucker form A = core x_1 U_1 ... x_k U_k. Mode i of the core has
    min(n_i, prod_{j != i} n_j) entries, so it is smaller than A whenever an
    unfolding is wide; it equals A's shape otherwise.
    """
    core: DenseTensor
    factors: Tuple[np.ndarray, ...]
    # per mode: columns whose singular value has a near-equal neighbour
    degenerate_columns: Tuple[np.ndarray, ...] = ()


@dataclass(frozen=True)
class TkpsvdResult:
    """
    A = sum_j sigmas[j] * A^(d)_j (x) ... (x) A^(1)_j.

    ``factors[j][i]`` holds A^(i+1)_j, so factors[j][0] is the rightmost
    Kronecker factor. ``multiplets`` lists 0-based term indices whose sigmas
    are near-equal, ``degenerate`` flags terms built from rotation-ambiguous
    singular vectors.
    """
    grid: FactorGrid
    sigmas: np.ndarray
    factors: Tuple[Tuple[DenseTensor, ...], ...]
    backend: Backend
    source_norm: float
    multiplets: Tuple[Tuple[int, ...], ...] = ()
    degenerate: Tuple[bool, ...] = field(default=())

    @property
    def rank(self) -> int:
        return self.sigmas.size

    @property
    def shape(self) -> Shape:
        return self.grid.target_shape

    def flagged(self) -> np.ndarray:
        """Boolean mask of terms without a per-term structure guarantee."""
        mask = np.zeros(self.rank, dtype=bool)
        for group in self.multiplets:
            mask[list(group)] = True
        if self.degenerate:
            mask |= np.asarray(self.degenerate, dtype=bool)
        return mask
