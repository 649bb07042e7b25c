"""
Orthogonal rank-1 polyadic decompositions.

TTr1SVD walks a tree of reshapes and economy SVDs; HOSVD computes a Tucker
core and expands every nonzero core entry into a rank-1 term. Both return
terms sorted by sigma (descending) with deterministic tie-breaking.
"""
import math
from functools import reduce
from math import prod
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import khatri_rao

from app.core.config import settings
from app.core.errors import IndexOutOfRange, InvalidArgument, OrderTooLow
from app.models.decomposition import HosvdCore, PolyadicDecomposition, Rank1Term, SvdResult
from app.models.enums import Backend
from app.models.tensor import DenseTensor, Shape
from app.services.kron import outer_rank1
from app.services.svd import economy_svd, near_equal_mask


def resolve_tol(tol: float | None) -> float:
    tol = settings.SVD_TOL if tol is None else float(tol)
    if tol < 0 or math.isnan(tol):
        raise InvalidArgument(f"tolerance must be nonnegative, got {tol}")
    return tol


def ttr1_term_bound(shape: Sequence[int]) -> int:
    """Upper bound on the number of TTr1SVD terms of a tensor of this shape."""
    return prod(min(shape[r], prod(shape[r + 1:])) for r in range(len(shape) - 1))


# ---------------------------------------
# TTr1SVD
# ---------------------------------------
def ttr1svd(t: DenseTensor, tol: float | None = None, gap: float | None = None) -> PolyadicDecomposition:
    tol = resolve_tol(tol)
    if t.order < 2:
        raise OrderTooLow(f"TTr1SVD needs order >= 2, got {t.order}")

    dims = t.shape
    last = len(dims) - 2
    use_logs = len(dims) > settings.LOG_SUM_DEPTH
    top = economy_svd(t.data.reshape(dims[0], -1, order="F"))
    if top.s[0] == 0:
        return PolyadicDecomposition(shape=dims, terms=(), backend=Backend.TTR1)

    floor = tol * float(top.s[0])
    log_floor = math.log(floor) if floor > 0 else -math.inf
    leaves: List[Rank1Term] = []

    def visit(node: SvdResult, level: int, weight: float, vectors: Tuple[np.ndarray, ...],
              path: Tuple[int, ...], degenerate: bool) -> None:
        ambiguous = near_equal_mask(node.s, gap)
        for j, sigma in enumerate(node.s):
            if sigma == 0:
                break
            if use_logs:
                w = weight + math.log(sigma)
                if w <= log_floor:
                    break
            else:
                w = weight * sigma
                if w <= floor:
                    break
            u = np.array(node.u[:, j])
            flag = degenerate or bool(ambiguous[j])
            if level == last:
                sigma_path = math.exp(w) if use_logs else w
                leaves.append(Rank1Term(
                    sigma=float(sigma_path),
                    vectors=vectors + (u, np.array(node.v[:, j])),
                    path=path + (j,),
                    degenerate=flag,
                ))
            else:
                child = economy_svd(node.v[:, j].reshape(dims[level + 1], -1, order="F"))
                visit(child, level + 1, w, vectors + (u,), path + (j,), flag)

    visit(top, 0, 0.0 if use_logs else 1.0, (), (), False)
    leaves.sort(key=lambda term: (-term.sigma, term.path))
    logger.debug("TTr1SVD of {} kept {} of at most {} terms", dims, len(leaves), ttr1_term_bound(dims))
    return PolyadicDecomposition(shape=dims, terms=tuple(leaves), backend=Backend.TTR1)


# ---------------------------------------
# HOSVD
# ---------------------------------------
def unfold(t: DenseTensor, mode: int) -> np.ndarray:
    """Mode-``mode`` (1-based) unfolding, remaining modes first-index-fastest."""
    return np.moveaxis(t.to_array(), mode - 1, 0).reshape(t.shape[mode - 1], -1, order="F")


def hosvd(t: DenseTensor, gap: float | None = None) -> HosvdCore:
    if t.order < 2:
        raise OrderTooLow(f"HOSVD needs order >= 2, got {t.order}")
    factors, ambiguous = [], []
    for mode in range(1, t.order + 1):
        res = economy_svd(unfold(t, mode))
        factors.append(res.u)
        ambiguous.append(near_equal_mask(res.s, gap))
    core = t
    for mode, u in enumerate(factors, start=1):
        core = core.mode_product(mode, u.T)
    return HosvdCore(core=core, factors=tuple(factors), degenerate_columns=tuple(ambiguous))


def hosvd_terms(core: HosvdCore, tol: float | None = None) -> PolyadicDecomposition:
    tol = resolve_tol(tol)
    shape = tuple(u.shape[0] for u in core.factors)
    values = core.core.data
    smax = float(np.max(np.abs(values)))
    if smax == 0:
        return PolyadicDecomposition(shape=shape, terms=(), backend=Backend.HOSVD)

    keep = np.flatnonzero(np.abs(values) > tol * smax)
    positions = np.unravel_index(keep, core.core.shape, order="F")
    terms = []
    for n, linear in enumerate(keep):
        idx = tuple(int(p[n]) for p in positions)
        vectors = [np.array(u[:, i]) for u, i in zip(core.factors, idx)]
        value = float(values[linear])
        if value < 0:
            vectors[0] = -vectors[0]
        degenerate = any(bool(mask[i]) for mask, i in zip(core.degenerate_columns, idx))
        terms.append(Rank1Term(sigma=abs(value), vectors=tuple(vectors), path=idx, degenerate=degenerate))
    # stable sort keeps linearization order among ties
    terms.sort(key=lambda term: -term.sigma)
    logger.debug("HOSVD core {} expanded into {} terms", core.core.shape, len(terms))
    return PolyadicDecomposition(shape=shape, terms=tuple(terms), backend=Backend.HOSVD)


def decompose(t: DenseTensor, backend: Backend = Backend.TTR1, tol: float | None = None) -> PolyadicDecomposition:
    if Backend(backend) is Backend.HOSVD:
        return hosvd_terms(hosvd(t), tol)
    return ttr1svd(t, tol)


# ---------------------------------------
# Expansion
# ---------------------------------------
def expand_term(term: Rank1Term) -> DenseTensor:
    return outer_rank1(term.vectors) * term.sigma


def rank1_sum(shape: Shape, sigmas: Sequence[float], vectors: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """
    vec of sum_j sigmas[j] * vectors[j][0] o ... o vectors[j][d-1], built from
    Khatri-Rao blocks of RECONSTRUCT_CHUNK terms.
    """
    out = np.zeros(prod(shape))
    chunk = max(1, settings.RECONSTRUCT_CHUNK)
    for start in range(0, len(sigmas), chunk):
        block = vectors[start:start + chunk]
        columns = [np.column_stack([term[i] for term in block]) for i in range(len(shape))]
        # kron(v_d, ..., v_1): mode 1 varies fastest, matching vec
        kr = reduce(lambda acc, mat: khatri_rao(mat, acc), columns[1:], columns[0])
        out += kr @ np.asarray(sigmas[start:start + chunk], dtype=np.float64)
    return out


def reconstruct_pd(pd: PolyadicDecomposition, r: int | None = None) -> DenseTensor:
    r = len(pd) if r is None else r
    if not 0 <= r <= len(pd):
        raise IndexOutOfRange(f"requested {r} terms of a {len(pd)}-term decomposition")
    terms = pd.terms[:r]
    vec = rank1_sum(pd.shape, [t.sigma for t in terms], [t.vectors for t in terms])
    return DenseTensor(vec, pd.shape)
