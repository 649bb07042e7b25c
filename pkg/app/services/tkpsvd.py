"""
TKPSVD: A = sum_j sigma_j A^(d)_j (x) ... (x) A^(1)_j.

A is reshaped into a kd-way tensor, its modes are regrouped factor by factor
and the resulting d-way tensor (mode i of size prod_r n^(i)_r) is handed to a
polyadic backend. Mode vector i of every rank-1 term is vec(A^(i)_j).
"""
from math import prod
from typing import Callable, List, Sequence, Tuple

import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.errors import EmptyInput, IndexOutOfRange, InvalidArgument, ShapeMismatch
from app.models.decomposition import TkpsvdResult
from app.models.enums import Backend
from app.models.permutation import PermutationMap
from app.models.tensor import DenseTensor, validate_shape
from app.schemas.grid_schema import FactorGrid
from app.services.backends import decompose, rank1_sum


# ---------------------------------------
# Index regrouping
# ---------------------------------------
def _regroup(grid: FactorGrid) -> Tuple[List[int], List[int]]:
    """kd-way split (mode-major) and the 1-based mode order making it factor-major."""
    d, k = grid.degree, grid.order
    split = [grid.dims[i][r] for r in range(k) for i in range(d)]
    perm = [r * d + i + 1 for i in range(d) for r in range(k)]
    return split, perm


def permute_to_factor_major(t: DenseTensor, grid: FactorGrid) -> DenseTensor:
    """The d-way tensor whose PD yields the Kronecker factors of ``t``."""
    grid.check_target(t.shape)
    split, perm = _regroup(grid)
    return t.reshape(split).permute_modes(perm).reshape(grid.factor_sizes)


def build_q_permutation(grid: FactorGrid, shape: Sequence[int] | None = None) -> PermutationMap:
    """Q with vec(A~) = Q vec(A)."""
    if shape is not None:
        grid.check_target(tuple(shape))
    split, perm = _regroup(grid)
    positions = np.arange(prod(grid.target_shape)).reshape(split, order="F")
    moved = np.transpose(positions, [p - 1 for p in perm])
    return PermutationMap.from_zero_based(moved.reshape(-1, order="F"))


# ---------------------------------------
# Sigma bookkeeping
# ---------------------------------------
def multiplet_groups(sigmas: Sequence[float], gap: float | None = None) -> Tuple[Tuple[int, ...], ...]:
    """Chains of sigmas with consecutive gaps <= gap * max(sigma), as 0-based term indices."""
    gap = settings.MULTIPLET_GAP if gap is None else gap
    s = np.asarray(sigmas, dtype=np.float64)
    if s.size < 2:
        return ()
    order = np.argsort(-s, kind="stable")
    ranked = s[order]
    close = np.abs(np.diff(ranked)) <= gap * ranked[0]
    groups, current = [], [int(order[0])]
    for j, joined in enumerate(close):
        if joined:
            current.append(int(order[j + 1]))
            continue
        if len(current) > 1:
            groups.append(tuple(sorted(current)))
        current = [int(order[j + 1])]
    if len(current) > 1:
        groups.append(tuple(sorted(current)))
    return tuple(groups)


def relative_error(sigmas: Sequence[float], r: int) -> float:
    """||A - A_r||_F / ||A||_F from the sigma tail, without reconstructing."""
    s = np.asarray(sigmas, dtype=np.float64)
    if s.size == 0:
        raise EmptyInput("relative error of an empty sigma list")
    if not 0 <= r <= s.size:
        raise IndexOutOfRange(f"truncation at {r} terms of {s.size}")
    total = np.sum(s * s)
    if total == 0:
        return 0.0
    return float(np.sqrt(np.sum(s[r:] * s[r:]) / total))


def error_curve(sigmas: Sequence[float]) -> np.ndarray:
    """Relative error for r = 0..R, nonincreasing."""
    s = np.asarray(sigmas, dtype=np.float64)
    if s.size == 0:
        raise EmptyInput("error curve of an empty sigma list")
    tails = np.append(np.cumsum((s * s)[::-1])[::-1], 0.0)
    if tails[0] == 0:
        return np.zeros(s.size + 1)
    return np.sqrt(tails / tails[0])


# ---------------------------------------
# Decomposition
# ---------------------------------------
def _result(grid: FactorGrid, sigmas, vectors, degenerate, backend: Backend, norm: float,
            wrap: Callable[[np.ndarray, Tuple[int, ...]], DenseTensor] = DenseTensor) -> TkpsvdResult:
    factors = tuple(tuple(wrap(v, shape) for v, shape in zip(term, grid.factor_shapes)) for term in vectors)
    sigmas = np.asarray(sigmas, dtype=np.float64)
    return TkpsvdResult(
        grid=grid,
        sigmas=sigmas,
        factors=factors,
        backend=backend,
        source_norm=norm,
        multiplets=multiplet_groups(sigmas),
        degenerate=tuple(bool(x) for x in degenerate),
    )


def tkpsvd(t: DenseTensor, grid: FactorGrid, backend: Backend = Backend.TTR1,
           tol: float | None = None) -> TkpsvdResult:
    grid.check_target(t.shape)
    backend = Backend(backend)
    norm = t.frobenius_norm()

    if grid.degree == 1:
        if norm == 0:
            return _result(grid, [], [], [], backend, norm)
        return _result(grid, [norm], [(t.data / norm,)], [False], backend, norm)

    a_tilde = permute_to_factor_major(t, grid)
    logger.debug("TKPSVD of {} on grid {}: permuted tensor {}", t.shape, grid, a_tilde.shape)
    pd = decompose(a_tilde, backend, tol)
    logger.info("TKPSVD ({}) produced {} terms", backend.value, len(pd))
    return _result(
        grid,
        pd.sigmas,
        [term.vectors for term in pd.terms],
        [term.degenerate for term in pd.terms],
        backend,
        norm,
    )


def _diagonal_tensor(v: np.ndarray, order: int) -> DenseTensor:
    n = v.size
    stride = sum(n ** m for m in range(order))
    data = np.zeros(n ** order)
    data[np.arange(n) * stride] = v
    return DenseTensor(data, (n,) * order)


def _main_diagonal(t: DenseTensor) -> np.ndarray:
    n = t.shape[0]
    stride = sum(n ** m for m in range(t.order))
    return t.data[np.arange(n) * stride]


def tkpsvd_diagonal(diag: Sequence[float], dims: Sequence[int], order: int = 2,
                    backend: Backend = Backend.TTR1, tol: float | None = None) -> TkpsvdResult:
    """
    TKPSVD of the order-k diagonal tensor with main diagonal ``diag``. Only
    the diagonal is decomposed; no index permutation is needed and the
    factors are diagonal tensors of shape (n_i,)*k.
    """
    diag = np.asarray(diag, dtype=np.float64).reshape(-1)
    dims = validate_shape(dims)
    if order < 1:
        raise InvalidArgument(f"order must be >= 1, got {order}")
    if prod(dims) != diag.size:
        raise ShapeMismatch(f"diagonal of length {diag.size} does not factor as {dims}")
    grid = FactorGrid.of([(n,) * order for n in dims])
    backend = Backend(backend)
    t = DenseTensor(diag, dims)
    norm = t.frobenius_norm()

    def wrap(v: np.ndarray, shape: Tuple[int, ...]) -> DenseTensor:
        return _diagonal_tensor(v, order)

    if len(dims) == 1:
        if norm == 0:
            return _result(grid, [], [], [], backend, norm, wrap=wrap)
        return _result(grid, [norm], [(diag / norm,)], [False], backend, norm, wrap=wrap)

    pd = decompose(t, backend, tol)
    return _result(
        grid,
        pd.sigmas,
        [term.vectors for term in pd.terms],
        [term.degenerate for term in pd.terms],
        backend,
        norm,
        wrap=wrap,
    )


# ---------------------------------------
# Reconstruction
# ---------------------------------------
def _check_terms(res: TkpsvdResult, r: int | None) -> int:
    r = res.rank if r is None else r
    if not 0 <= r <= res.rank:
        raise IndexOutOfRange(f"requested {r} terms of a {res.rank}-term decomposition")
    return r


def _kron_sum(grid: FactorGrid, sigmas: Sequence[float], vectors) -> DenseTensor:
    if grid.degree == 1:
        vec = np.zeros(prod(grid.target_shape))
        for sigma, (v,) in zip(sigmas, vectors):
            vec += sigma * v
        return DenseTensor(vec, grid.target_shape)
    tilde = rank1_sum(grid.factor_sizes, sigmas, vectors)
    q = build_q_permutation(grid)
    return DenseTensor(q.inverse().apply(tilde), grid.target_shape)


def reconstruct_kp(res: TkpsvdResult, r: int | None = None) -> DenseTensor:
    """
    sum_{j<=r} sigma_j A^(d)_j (x) ... (x) A^(1)_j, evaluated as the rank-1
    sum of the permuted tensor followed by Q^T.
    """
    r = _check_terms(res, r)
    vectors = [tuple(f.data for f in term) for term in res.factors[:r]]
    return _kron_sum(res.grid, res.sigmas[:r], vectors)


def reconstruct_diagonal(res: TkpsvdResult, r: int | None = None) -> np.ndarray:
    """Main diagonal of the truncated expansion of a diagonal TKPSVD."""
    r = _check_terms(res, r)
    dims = tuple(f[0] for f in res.grid.dims)
    vectors = [tuple(_main_diagonal(f) for f in term) for term in res.factors[:r]]
    if len(dims) == 1:
        out = np.zeros(dims[0])
        for sigma, (v,) in zip(res.sigmas[:r], vectors):
            out += sigma * v
        return out
    return rank1_sum(dims, res.sigmas[:r], vectors)


def reconstruct_resolution(res: TkpsvdResult, r: int | None, k_factors: int) -> DenseTensor:
    """
    Reduced-resolution approximant keeping the ``k_factors`` leftmost
    (largest) Kronecker factors; each dropped factor collapses to its mean
    entry, which block-averages the full reconstruction.
    """
    r = _check_terms(res, r)
    d = res.grid.degree
    if not 1 <= k_factors <= d:
        raise IndexOutOfRange(f"kFactors must lie in 1..{d}, got {k_factors}")
    dropped = d - k_factors
    sub = FactorGrid(dims=res.grid.dims[dropped:])
    sigmas = [
        sigma * prod(float(np.mean(f.data)) for f in term[:dropped])
        for sigma, term in zip(res.sigmas[:r], res.factors[:r])
    ]
    vectors = [tuple(f.data for f in term[dropped:]) for term in res.factors[:r]]
    return _kron_sum(sub, sigmas, vectors)
