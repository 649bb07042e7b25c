"""
General symmetries as permutations of vec(A).

A tensor is general symmetric under P when P vec(A) = vec(A), and general
skew-symmetric when P vec(A) = -vec(A). The canonical kinds are

- symmetric: perfect shuffle S (cyclic index rotation),
- centrosymmetric: exchange J (every index reversed),
- persymmetric: S J,
- Toeplitz / Hankel: shifted-index maps whose orbits are the index classes
  left invariant by the shifts.
"""
from typing import List, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from app.core.config import settings
from app.core.errors import BadShiftPattern, InvalidArgument, ShapeMismatch
from app.models.decomposition import TkpsvdResult
from app.models.enums import StructureTag
from app.models.permutation import PermutationMap
from app.models.tensor import DenseTensor, Shape, checked_size, validate_shape
from app.schemas.grid_schema import FactorGrid
from app.schemas.structure_schema import ShiftPattern, StructureKind, StructureReport, TermStructureSummary
from app.services.tkpsvd import build_q_permutation

CUBICAL_KINDS = {StructureTag.SYMMETRIC, StructureTag.PERSYMMETRIC, StructureTag.HANKEL}


def _positions(shape: Shape) -> np.ndarray:
    return np.arange(checked_size(shape)).reshape(shape, order="F")


def _from_positions(arr: np.ndarray) -> PermutationMap:
    return PermutationMap.from_zero_based(arr.reshape(-1, order="F"))


def _require_cubical(shape: Shape, what: str) -> None:
    if len(set(shape)) != 1:
        raise ShapeMismatch(f"{what} needs a cubical shape, got {shape}")


# ---------------------------------------
# Canonical permutations
# ---------------------------------------
def perfect_shuffle(n: int, k: int) -> PermutationMap:
    """S(n, k): (S a)[j1, j2, ..., jk] = a[j2, ..., jk, j1]."""
    if n < 1 or k < 1:
        raise InvalidArgument(f"perfect shuffle needs n, k >= 1, got n={n}, k={k}")
    return _from_positions(np.moveaxis(_positions((n,) * k), -1, 0))


def exchange_map(size: int) -> PermutationMap:
    if size < 1:
        raise InvalidArgument(f"exchange map needs N >= 1, got {size}")
    return PermutationMap.from_zero_based(np.arange(size - 1, -1, -1))


def persym_map(n: int, k: int) -> PermutationMap:
    return perfect_shuffle(n, k) @ exchange_map(checked_size((n,) * k))


def _cycle_map(labels: np.ndarray) -> PermutationMap:
    """Send every position to the next larger position of its class, wrapping around."""
    n = labels.size
    order = np.lexsort((np.arange(n), labels))
    ranked = labels[order]
    boundary = ranked[1:] != ranked[:-1]
    first = np.r_[True, boundary]
    last = np.r_[boundary, True]
    start = np.maximum.accumulate(np.where(first, np.arange(n), 0))
    succ = np.where(last, start, np.arange(n) + 1)
    out = np.empty(n, dtype=np.int64)
    out[order] = order[succ]
    return PermutationMap.from_zero_based(out)


def _components(n: int, rows: List[np.ndarray], cols: List[np.ndarray]) -> np.ndarray:
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return labels


def shifted_index_map(shape: Sequence[int], pattern, base: "StructureTag | StructureKind | None" = None) -> PermutationMap:
    """
    Permutation whose fixed vectors are exactly the tensors invariant under
    the index shift ``pattern`` (and under every index permutation when
    ``base`` is symmetric). Each index tuple is linked to its in-bounds
    shifted partner; the closure of these links gives the orbits, and every
    position maps to the next larger position of its orbit.
    """
    shape = validate_shape(shape)
    k = len(shape)
    pattern = ShiftPattern.of(pattern)
    if len(pattern.shifts) != k:
        raise BadShiftPattern(f"{len(pattern.shifts)} shifts for an order-{k} tensor")
    n = checked_size(shape)

    delta = np.asarray(pattern.shifts, dtype=np.int64)[:, None]
    multi = np.array(np.unravel_index(np.arange(n), shape, order="F"))
    target = multi + delta
    inside = np.all((target >= 0) & (target < np.asarray(shape)[:, None]), axis=0)
    if not inside.any():
        raise BadShiftPattern(f"shifts {pattern.shifts} leave every index of {shape} out of bounds")
    rows = [np.flatnonzero(inside)]
    cols = [np.ravel_multi_index(tuple(target[:, inside]), shape, order="F")]

    base_tag = base.tag if isinstance(base, StructureKind) else base
    if base_tag is not None and StructureTag(base_tag) is StructureTag.SYMMETRIC:
        _require_cubical(shape, "a symmetric base")
        positions = _positions(shape)
        rows.append(np.arange(n))
        cols.append(perfect_shuffle(shape[0], k).zero_based)
        if k > 1:
            rows.append(np.arange(n))
            cols.append(np.swapaxes(positions, 0, 1).reshape(-1, order="F"))
    elif base_tag is not None:
        raise InvalidArgument(f"unsupported base kind {base_tag}")

    return _cycle_map(_components(n, rows, cols))


def toeplitz_map(shape: Sequence[int]) -> PermutationMap:
    return shifted_index_map(shape, ShiftPattern.toeplitz(len(shape)))


def hankel_map(shape: Sequence[int]) -> PermutationMap:
    k = len(shape)
    if k < 2:
        raise BadShiftPattern("Hankel structure needs order >= 2")
    return shifted_index_map(shape, ShiftPattern.hankel(k), base=StructureTag.SYMMETRIC)


# ---------------------------------------
# Kind dispatch
# ---------------------------------------
def kind_map(kind: StructureKind, shape: Sequence[int]) -> PermutationMap:
    shape = validate_shape(shape)
    tag, k = kind.tag, len(shape)
    if tag in CUBICAL_KINDS:
        _require_cubical(shape, f"{tag.value} structure")

    if tag is StructureTag.GENERAL:
        if kind.permutation.size != checked_size(shape):
            raise ShapeMismatch(f"permutation of size {kind.permutation.size} for shape {shape}")
        return kind.permutation
    if tag is StructureTag.SYMMETRIC:
        return perfect_shuffle(shape[0], k)
    if tag is StructureTag.CENTROSYMMETRIC:
        return exchange_map(checked_size(shape))
    if tag is StructureTag.PERSYMMETRIC:
        return persym_map(shape[0], k)
    if tag is StructureTag.TOEPLITZ:
        return shifted_index_map(shape, kind.shift or ShiftPattern.toeplitz(k))
    if kind.shift is not None:
        return shifted_index_map(shape, kind.shift, base=StructureTag.SYMMETRIC)
    return hankel_map(shape)


def factor_maps(kind: StructureKind, grid: FactorGrid) -> List[PermutationMap]:
    """Per-factor maps P_1..P_d of a canonical kind on the grid's factor shapes."""
    if kind.tag is StructureTag.GENERAL:
        raise InvalidArgument("per-factor maps of a general symmetry must be supplied explicitly")
    return [kind_map(kind, shape) for shape in grid.factor_shapes]


def kron_of_maps(parts: Sequence[PermutationMap]) -> PermutationMap:
    """P_d (x) ... (x) P_1 for parts = [P_1, ..., P_d], acting on first-index-fastest vecs."""
    sizes = tuple(p.size for p in parts)
    return _from_positions(_positions(sizes)[np.ix_(*[p.zero_based for p in parts])])


def compose_factored(parts: Sequence[PermutationMap], grid: FactorGrid) -> PermutationMap:
    """P = Q^T (P_d (x) ... (x) P_1) Q, computed on indices."""
    if len(parts) != grid.degree:
        raise ShapeMismatch(f"{len(parts)} factor maps for a degree-{grid.degree} grid")
    for i, (part, size) in enumerate(zip(parts, grid.factor_sizes), start=1):
        if part.size != size:
            raise ShapeMismatch(f"factor map {i} has size {part.size}, factor {i} has {size} entries")
    q = build_q_permutation(grid)
    return q.T @ kron_of_maps(parts) @ q


# ---------------------------------------
# Generation
# ---------------------------------------
def orbit_labels(kind: StructureKind, shape: Sequence[int]) -> np.ndarray:
    """Orbit label of every vec position; entries sharing a label are equal."""
    shape = validate_shape(shape)
    if kind.tag is StructureTag.SYMMETRIC:
        _require_cubical(shape, "symmetric structure")
        multi = np.array(np.unravel_index(np.arange(checked_size(shape)), shape, order="F"))
        canonical = np.ravel_multi_index(tuple(np.sort(multi, axis=0)), shape, order="F")
        return np.unique(canonical, return_inverse=True)[1].reshape(-1)
    return kind_map(kind, shape).orbit_labels()


def generate(kind: StructureKind, shape: Sequence[int], seed: int = 0) -> DenseTensor:
    """One standard normal value per orbit, so the structure holds exactly."""
    shape = validate_shape(shape)
    labels = orbit_labels(kind, shape)
    values = np.random.default_rng(seed).standard_normal(int(labels.max()) + 1)
    return DenseTensor(values[labels], shape)


# ---------------------------------------
# Checks
# ---------------------------------------
def check_structure(t: DenseTensor, p: PermutationMap, tol: float | None = None,
                    tag: StructureTag = StructureTag.GENERAL) -> StructureReport:
    """
    Sign and residual of the normalized vec a under P: a^T P a is +1 for
    general symmetric and -1 for general skew-symmetric tensors. The zero
    tensor is reported as symmetric with residual 0.
    """
    tol = settings.STRUCTURE_TOL if tol is None else tol
    if p.size != t.size:
        raise ShapeMismatch(f"permutation of size {p.size} for a tensor with {t.size} entries")
    norm = t.frobenius_norm()
    if norm == 0:
        return StructureReport(tag=tag, sign=1, residual=0.0, inner=1.0, structured=True)
    a = t.data / norm
    pa = p.apply(a)
    inner = float(np.sum(a * pa))
    sign = 1 if inner >= 0 else -1
    diff = pa - sign * a
    residual = float(np.sqrt(np.sum(diff * diff)))
    return StructureReport(tag=tag, sign=sign, residual=residual, inner=inner, structured=residual <= tol)


def analyze_preservation(res: TkpsvdResult, parts: Sequence[PermutationMap], tol: float | None = None,
                         tag: StructureTag = StructureTag.GENERAL) -> List[TermStructureSummary]:
    """Per-term structure of the Kronecker factors A^(i)_j under P_i."""
    if len(parts) != res.grid.degree:
        raise ShapeMismatch(f"{len(parts)} factor maps for a degree-{res.grid.degree} decomposition")
    for i, (part, size) in enumerate(zip(parts, res.grid.factor_sizes), start=1):
        if part.size != size:
            raise ShapeMismatch(f"factor map {i} has size {part.size}, factor {i} has {size} entries")

    flagged = res.flagged()
    summaries = []
    for j, term in enumerate(res.factors):
        reports = [check_structure(f, p, tol, tag) for f, p in zip(term, parts)]
        signs = [r.sign for r in reports]
        summaries.append(TermStructureSummary(
            term=j + 1,
            sigma=float(res.sigmas[j]),
            signs=signs,
            residuals=[r.residual for r in reports],
            skew_count=signs.count(-1),
            all_structured=all(r.structured for r in reports),
            multiplet=bool(flagged[j]),
        ))
    return summaries
