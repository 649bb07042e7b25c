"""Deterministic economy SVD shared by every backend."""
from typing import List, Tuple

import numpy as np
import scipy.linalg
from loguru import logger

from app.core.config import settings
from app.core.errors import InvalidArgument, NonFiniteInput
from app.models.decomposition import SvdResult
from app.models.tensor import DenseTensor


def _lapack_svd(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    try:
        return scipy.linalg.svd(a, full_matrices=False, check_finite=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.debug("gesdd did not converge on a {}x{} matrix, retrying with gesvd", *a.shape)
    try:
        return scipy.linalg.svd(a, full_matrices=False, check_finite=False, lapack_driver="gesvd")
    except np.linalg.LinAlgError as e:
        raise NonFiniteInput(f"SVD failed to converge: {e}") from e


def _fix_signs(u: np.ndarray, vt: np.ndarray) -> None:
    # largest |entry| of each U column (first on ties) made nonnegative
    pivots = np.argmax(np.abs(u), axis=0)
    flip = u[pivots, np.arange(u.shape[1])] < 0
    u[:, flip] *= -1.0
    vt[flip, :] *= -1.0


def economy_svd(a: "np.ndarray | DenseTensor") -> SvdResult:
    mat = a.to_array() if isinstance(a, DenseTensor) else np.asarray(a, dtype=np.float64)
    if mat.ndim != 2:
        raise InvalidArgument(f"economy_svd needs a matrix, got {mat.ndim} dimensions")
    if not np.isfinite(mat).all():
        raise NonFiniteInput("matrix contains NaN or infinite entries")

    m, n = mat.shape
    if m > settings.TALL_SKINNY_RATIO * n:
        q, r = scipy.linalg.qr(mat, mode="economic", check_finite=False)
        ur, s, vt = _lapack_svd(r)
        u = q @ ur
    else:
        u, s, vt = _lapack_svd(mat)

    u = np.array(u, order="F")
    vt = np.array(vt)
    _fix_signs(u, vt)
    return SvdResult(u=u, s=np.array(s), v=np.array(vt.T, order="F"))


def truncated_triples(res: SvdResult, tol: float) -> List[Tuple[float, np.ndarray, np.ndarray]]:
    """(sigma, u, v) triples with sigma > tol * s[0], in order."""
    if tol < 0:
        raise InvalidArgument(f"tolerance must be nonnegative, got {tol}")
    if res.s.size == 0:
        return []
    floor = tol * res.s[0]
    return [(float(s), res.u[:, j], res.v[:, j]) for j, s in enumerate(res.s) if s > floor]


def near_equal_mask(s: np.ndarray, gap: float | None = None) -> np.ndarray:
    """
    True for every singular value within gap*s[0] of a neighbour; the
    matching singular vectors are only defined up to a rotation.
    """
    gap = settings.MULTIPLET_GAP if gap is None else gap
    mask = np.zeros(s.size, dtype=bool)
    if s.size < 2 or s[0] == 0:
        return mask
    close = np.abs(np.diff(s)) <= gap * s[0]
    mask[:-1] |= close
    mask[1:] |= close
    return mask
