"""
Readers and writers for .ten / .tenb tensors, .tkp decompositions and
permutation pattern listings. Layouts are described in FORMATS.md.
"""
import struct
from pathlib import Path
from typing import BinaryIO

import numpy as np
from pydantic import ValidationError

from app.core.errors import FormatError
from app.models.decomposition import TkpsvdResult
from app.models.enums import Backend
from app.models.permutation import PermutationMap
from app.models.tensor import DenseTensor
from app.schemas.file_schema import (
    DECOMPOSITION_MAGIC,
    TENSOR_MAGIC,
    DecompositionHeader,
    TensorHeader,
)
from app.schemas.grid_schema import FactorGrid
from app.services.tkpsvd import multiplet_groups

LE_F64 = np.dtype("<f8")


def _read_exact(fh: BinaryIO, n: int) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise FormatError(f"unexpected end of file: wanted {n} bytes, got {len(buf)}")
    return buf


def _floats(fh: BinaryIO, count: int) -> np.ndarray:
    return np.frombuffer(_read_exact(fh, count * LE_F64.itemsize), dtype=LE_F64).astype(np.float64)


def _header(model, **fields):
    try:
        return model(**fields)
    except ValidationError as e:
        raise FormatError(e.errors()[0]["msg"]) from e


# ---------------------------------------
# Tensors
# ---------------------------------------
def write_tensor(path: "str | Path", t: DenseTensor) -> None:
    """Binary for .tenb, 17-significant-digit text for anything else."""
    path = Path(path)
    if path.suffix == ".tenb":
        with path.open("wb") as fh:
            fh.write(TENSOR_MAGIC)
            fh.write(struct.pack("<I", t.order))
            fh.write(struct.pack(f"<{t.order}Q", *t.shape))
            fh.write(t.data.astype(LE_F64).tobytes())
        return
    lines = [TENSOR_MAGIC.decode(), str(t.order), " ".join(map(str, t.shape))]
    lines += [f"{x:.17g}" for x in t.data]
    path.write_text("\n".join(lines) + "\n")


def read_tensor(path: "str | Path") -> DenseTensor:
    path = Path(path)
    if path.suffix == ".tenb":
        with path.open("rb") as fh:
            magic = _read_exact(fh, 4)
            (order,) = struct.unpack("<I", _read_exact(fh, 4))
            dims = struct.unpack(f"<{order}Q", _read_exact(fh, 8 * order))
            header = _header(TensorHeader, magic=magic, order=order, dims=dims)
            data = _floats(fh, header.count)
            if fh.read(1):
                raise FormatError("trailing bytes after tensor payload")
        return DenseTensor(data, header.dims)

    tokens = path.read_text().split()
    if len(tokens) < 2:
        raise FormatError(f"{path} is not a tensor file")
    try:
        order = int(tokens[1])
        dims = tuple(int(x) for x in tokens[2:2 + order])
        header = _header(TensorHeader, magic=tokens[0].encode(), order=order, dims=dims)
        values = np.array([float(x) for x in tokens[2 + order:]])
    except ValueError as e:
        raise FormatError(f"malformed tensor text: {e}") from e
    if values.size != header.count:
        raise FormatError(f"expected {header.count} values, found {values.size}")
    return DenseTensor(values, header.dims)


# ---------------------------------------
# Decompositions
# ---------------------------------------
def write_decomposition(path: "str | Path", res: TkpsvdResult) -> None:
    grid = res.grid
    with Path(path).open("wb") as fh:
        fh.write(DECOMPOSITION_MAGIC)
        fh.write(struct.pack("<II", grid.degree, grid.order))
        flat = [n for f in grid.dims for n in f]
        fh.write(struct.pack(f"<{len(flat)}Q", *flat))
        fh.write(struct.pack("<Bd", res.backend.tag, res.source_norm))
        fh.write(struct.pack("<Q", res.rank))
        fh.write(res.sigmas.astype(LE_F64).tobytes())
        degenerate = res.degenerate or (False,) * res.rank
        fh.write(np.asarray(degenerate, dtype=np.uint8).tobytes())
        for term in res.factors:
            for factor in term:
                fh.write(factor.data.astype(LE_F64).tobytes())


def read_decomposition(path: "str | Path") -> TkpsvdResult:
    with Path(path).open("rb") as fh:
        magic = _read_exact(fh, 4)
        degree, order = struct.unpack("<II", _read_exact(fh, 8))
        flat = struct.unpack(f"<{degree * order}Q", _read_exact(fh, 8 * degree * order))
        tag, norm = struct.unpack("<Bd", _read_exact(fh, 9))
        (terms,) = struct.unpack("<Q", _read_exact(fh, 8))
        if tag not in (0, 1):
            raise FormatError(f"unknown backend tag {tag}")
        header = _header(
            DecompositionHeader,
            magic=magic,
            degree=degree,
            order=order,
            dims=tuple(tuple(flat[i * order:(i + 1) * order]) for i in range(degree)),
            backend=Backend.from_tag(tag),
            source_norm=norm,
            terms=terms,
        )
        sigmas = _floats(fh, terms)
        degenerate = np.frombuffer(_read_exact(fh, terms), dtype=np.uint8)
        payload = _floats(fh, terms * header.floats_per_term)
        if fh.read(1):
            raise FormatError("trailing bytes after decomposition payload")

    grid = FactorGrid.of(header.dims)
    sizes = grid.factor_sizes
    factors, offset = [], 0
    for _ in range(terms):
        term = []
        for shape, size in zip(grid.factor_shapes, sizes):
            term.append(DenseTensor(payload[offset:offset + size], shape))
            offset += size
        factors.append(tuple(term))
    return TkpsvdResult(
        grid=grid,
        sigmas=sigmas,
        factors=tuple(factors),
        backend=header.backend,
        source_norm=header.source_norm,
        multiplets=multiplet_groups(sigmas),
        degenerate=tuple(bool(x) for x in degenerate),
    )


def read_sigmas(path: "str | Path") -> np.ndarray:
    """Sigma list from a .tkp file or a whitespace-separated text file."""
    path = Path(path)
    if path.suffix == ".tkp":
        return read_decomposition(path).sigmas
    try:
        return np.array([float(x) for x in path.read_text().split()])
    except ValueError as e:
        raise FormatError(f"{path} is not a list of numbers: {e}") from e


# ---------------------------------------
# Permutations
# ---------------------------------------
def write_permutation_pattern(path: "str | Path", p: PermutationMap) -> None:
    """One 1-based ``row col`` pair per line: the nonzeros of the permutation matrix."""
    rows, cols = p.pattern()
    Path(path).write_text("".join(f"{r} {c}\n" for r, c in zip(rows, cols)))


def read_permutation_pattern(path: "str | Path") -> PermutationMap:
    pairs = np.loadtxt(path, dtype=np.int64, ndmin=2)
    if pairs.shape[1] != 2:
        raise FormatError(f"{path} does not hold row/col pairs")
    one_based = np.zeros(pairs.shape[0], dtype=np.int64)
    rows = pairs[:, 0] - 1
    if rows.min() < 0 or rows.max() >= one_based.size or np.unique(rows).size != rows.size:
        raise FormatError(f"{path} rows are not a permutation")
    one_based[rows] = pairs[:, 1]
    return PermutationMap(one_based)
